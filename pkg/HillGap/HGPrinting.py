"""
:Date: 03.02.2026

..	versionadded:: v0.1.0

Console formatting: SGR color styles, durations, ``__repr__`` helpers and the verification table.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Final, Iterable, Optional, Sequence, Sized, SupportsFloat, Tuple, Union

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ ANSI CONTROL SEQUENCES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

CSI: Final[str] = "\033["
""" Control sequence introducer. """

REPR_ITEMS: Final[int] = 8
""" Number of entries of an iterable shown by :py:func:`repr_str` before it is cut off. """

@dataclass(frozen=True)
class Style:
	"""
	An SGR text style, i.e. a list of ``CSI <code> m`` sequences. Styles are combined with ``+``; adding a string on
	either side renders the style first. The empty style renders as the empty string.

	:param codes: the SGR parameters, applied in order
	"""
	codes: Tuple[int, ...] = ()

	def __post_init__(self):
		if not all(isinstance(c, int) and c >= 0 for c in self.codes):
			raise ValueError(f"SGR codes must be non-negative integers, but received {self.codes!r}")

	def __len__(self) -> int:
		return len(self.codes)

	def __add__(self, other: Union[Style, str]) -> Union[Style, str]:
		if isinstance(other, Style):
			return Style(self.codes + other.codes)
		if isinstance(other, str):
			return str(self) + other
		return NotImplemented

	def __radd__(self, other: str) -> str:
		if isinstance(other, str):
			return other + str(self)
		return NotImplemented

	def __str__(self) -> str:
		return "".join(f"{CSI}{c}m" for c in self.codes)

RESET_ALL: Final[Style] = Style((0,))
NORMAL: Final[Style] = Style()
BRIGHT: Final[Style] = Style((1,))

RED: Final[Style] = Style((31,))
GREEN: Final[Style] = Style((32,))
YELLOW: Final[Style] = Style((33,))
GRAY: Final[Style] = Style((90,))
LIGHT_RED: Final[Style] = Style((91,))

def cl_s(s: Any, style: Style = NORMAL, *, boolean: bool = False) -> str:
	"""
	:param s: the object to render with ``str``
	:param style: the style to apply
	:param boolean: if set, ``GREEN`` or ``RED`` is appended to ``style`` depending on the truth value of ``s``
	:return: ``str(s)`` wrapped in ``style`` and :py:data:`RESET_ALL`
	"""
	if boolean:
		style = style + (GREEN if s else RED)
	return f"{style}{s}{RESET_ALL}"

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ TIME STRING ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

_TIME_UNITS: Final[Tuple[Tuple[float, float, str], ...]] = ((1.0e-4, 1.0e6, "µs"), (1.0e-1, 1.0e3, "ms"))

def time_str(secs: SupportsFloat, n_digits: int = 3) -> str:
	"""
	Formats a duration of a verification check, ``µs`` and ``ms`` for short ones, minutes and seconds above one
	minute.

	:raise TypeError: if ``secs`` has no float value
	:raise ValueError: if ``secs`` is negative, including ``-0.0``
	"""
	if not isinstance(secs, SupportsFloat):
		raise TypeError(f"secs must support __float__, but received type {type(secs).__name__!r}")
	secs = float(secs)
	if math.copysign(1.0, secs) < 0:
		raise ValueError(f"durations must be non-negative, but received {secs!r}")

	for limit, factor, unit in _TIME_UNITS:
		if secs <= limit:
			return f"{secs * factor:.{n_digits}f}{unit}"
	if secs < 60:
		return f"{secs:.{n_digits}f}s"
	minutes, rest = divmod(secs, 60)
	return f"{int(minutes)}m {rest:.{n_digits}f}s"

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ MISC HELP FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _short_iterable(values: Iterable, value_function: Callable[[Any], str]) -> str:
	shown = list()
	for i, v in enumerate(values):
		if i == REPR_ITEMS:
			shown.append("...")
			break
		shown.append(value_function(v))
	return f"[{', '.join(shown)}]"

def repr_str(obj: Any,
			 *properties: property,
			 value_function: Callable[[Any], str] = repr,
			 include_none: bool = False,
			 include_empty_sized: bool = True,
			 joiner: str = ", ",
			 **kwargs: Any) -> str:
	"""
	Builds ``ClassName(key=value, ...)`` from the getters of ``properties`` followed by ``kwargs``. Iterables other
	than strings are shortened to :py:data:`REPR_ITEMS` entries, so arrays of grid values stay readable in logs.

	:param include_none: keep entries whose value is ``None``
	:param include_empty_sized: keep entries whose value is an empty container
	:raise NameError: if one of ``properties`` has no getter
	"""
	entries = list()
	for prop in properties:
		if prop.fget is None:
			raise NameError(f"property {prop!r} of {type(obj).__name__!r} has no getter")
		entries.append((prop.fget.__name__, prop.fget(obj)))
	entries.extend(kwargs.items())

	strings = list()
	for key, val in entries:
		if val is None and not include_none:
			continue
		if isinstance(val, Sized) and len(val) == 0 and not include_empty_sized:
			continue
		if isinstance(val, Iterable) and not isinstance(val, (str, bytes)):
			strings.append(f"{key}={_short_iterable(val, value_function)}")
		else:
			strings.append(f"{key}={value_function(val)}")
	return f"{type(obj).__name__}({joiner.join(strings)})"

def table_str(header: Sequence[str],
			  rows: Iterable[Sequence[Any]],
			  *,
			  status_column: Optional[int] = None,
			  use_color: bool = True) -> str:
	"""
	Renders a plain text table with left-aligned columns.

	:param header: the column titles
	:param rows: the table rows, each with as many entries as ``header``
	:param status_column: index of a boolean column rendered as colored ``PASS`` / ``FAIL``
	:param use_color: whether or not to color the status column
	:return: the table as multi-line string

	:raise ValueError: if a row does not match the header length
	"""
	cells = [[str(h) for h in header]]
	status = [None]
	for row in rows:
		row = list(row)
		if len(row) != len(header):
			raise ValueError(f"row {row!r} has {len(row)} entries, but the header has {len(header)}")
		if status_column is not None:
			status.append(bool(row[status_column]))
			row[status_column] = "PASS" if row[status_column] else "FAIL"
		else:
			status.append(None)
		cells.append([str(c) for c in row])

	widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
	lines = list()
	for n, (row, ok) in enumerate(zip(cells, status)):
		parts = list()
		for i, c in enumerate(row):
			text = c.ljust(widths[i])
			if use_color and ok is not None and i == status_column:
				text = cl_s(text, boolean=ok)
			parts.append(text)
		lines.append("  ".join(parts).rstrip())
		if n == 0:
			lines.append("  ".join("-" * w for w in widths))
	return "\n".join(lines)
