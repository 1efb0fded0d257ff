"""
:Date: 03.02.2026

..	versionadded:: v0.1.0

Leveled diagnostic output. Results are written to ``stdout`` by the command line, so every entry of a
:py:class:`Logger` goes to ``stderr`` unless a stream is given explicitly.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import enum
import os
import sys
from typing import Any, Callable, Final, FrozenSet, Iterable, Optional, TextIO, Tuple, TypeVar, Union

from HillGap.HGDecorators import copy_func_attrs
from HillGap.HGPrinting import Style, cl_s, repr_str, BRIGHT, GRAY, LIGHT_RED, RED, YELLOW

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

_WINDOWS_ANSI_HOSTS: Final[Tuple[str, ...]] = ("ANSICON", "WT_PROFILE_ID", "WT_SESSION")
""" Environment variables of Windows terminals known to understand SGR sequences. """

class Level(enum.Enum):
	"""
	Severity of a log entry. Members are ordered by their rank, carry the tag printed in front of each entry and the
	style used on a terminal. Entries of level :py:attr:`ERROR` and above are written to :py:attr:`Logger.err`.
	"""
	VERBOSE = (0, "Verbose", GRAY)
	INFO = (1, "Info", BRIGHT)
	WARNING = (3, "Warning", YELLOW)
	ERROR = (4, "Error", BRIGHT + LIGHT_RED)
	FATAL_ERROR = (10, "Fatal Error", RED)

	def __init__(self, rank: int, tag: str, style: Style):
		self.rank = rank
		self.tag = tag
		self.style = style

	@property
	def prefix(self) -> str:
		return f"[{self.tag}] "

	@property
	def is_error(self) -> bool:
		return self >= Level.ERROR

	def __lt__(self, other: Level) -> bool:
		if not isinstance(other, Level):
			return NotImplemented
		return self.rank < other.rank

	def __le__(self, other: Level) -> bool:
		if not isinstance(other, Level):
			return NotImplemented
		return self.rank <= other.rank

	def __gt__(self, other: Level) -> bool:
		if not isinstance(other, Level):
			return NotImplemented
		return self.rank > other.rank

	def __ge__(self, other: Level) -> bool:
		if not isinstance(other, Level):
			return NotImplemented
		return self.rank >= other.rank

	def __str__(self) -> str:
		return self.name

VERBOSE: Final = Level.VERBOSE
INFO: Final = Level.INFO
WARNING: Final = Level.WARNING
ERROR: Final = Level.ERROR
FATAL_ERROR: Final = Level.FATAL_ERROR

VERBOSITY_LEVELS: Final[Tuple[Level, ...]] = (WARNING, INFO, VERBOSE)
""" Minimum levels selected by ``-v`` given zero times, once, and twice or more. """

_Func = TypeVar("_Func", bound=Callable)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def _check_level(level: Any) -> Level:
	if not isinstance(level, Level):
		raise TypeError(f"expected a member of {Level.__name__!r}, but received {level!r} of type "
						f"{type(level).__name__!r}")
	return level

class Logger:
	"""
	Writes entries of at least :py:attr:`min_level` that are not in :py:attr:`level_mask`. Numeric modules log through
	the shared :py:data:`DEFAULT_LOGGER` with a bracketed context: ::

		from HillGap.HGLogger import log, WARNING
		log("[band_structure] scan step 0.0025 may miss narrow bands", level=WARNING)

	prints ``[Warning] [band_structure] scan step 0.0025 may miss narrow bands`` to ``stderr``.

	:param min_level: the lowest level that is printed
	:param level_mask: levels that are never printed
	:param out: stream for entries below :py:attr:`Level.ERROR`, ``None`` for the current ``sys.stderr``
	:param err: stream for errors, ``None`` for the current ``sys.stderr``
	:param use_color: color the entries when the stream is a terminal
	"""

	def __init__(self,
				 min_level: Level = WARNING,
				 level_mask: Optional[Iterable[Level]] = None,
				 out: Optional[TextIO] = None,
				 err: Optional[TextIO] = None,
				 use_color: bool = True):
		self.min_level = min_level
		self.level_mask = level_mask
		self._out = out
		self._err = err
		self.use_color = use_color

	# ~~~~~~~~~~~~~~~ properties ~~~~~~~~~~~~~~~

	@property
	def out(self) -> TextIO:
		# resolved on every write so that redirected stderr is honoured
		return self._out if self._out is not None else sys.stderr

	@property
	def err(self) -> TextIO:
		return self._err if self._err is not None else sys.stderr

	@property
	def min_level(self) -> Level:
		return self._min_level

	@min_level.setter
	def min_level(self, level: Level) -> None:
		""" :raise TypeError: if ``level`` is not a :py:class:`Level` """
		self._min_level = _check_level(level)

	@property
	def level_mask(self) -> FrozenSet[Level]:
		return self._level_mask

	@level_mask.setter
	def level_mask(self, mask: Optional[Iterable[Level]]) -> None:
		self._level_mask = frozenset(_check_level(l) for l in (mask or ()))

	# ~~~~~~~~~~~~~~~ output ~~~~~~~~~~~~~~~

	def is_enabled(self, level: Level) -> bool:
		return level >= self._min_level and level not in self._level_mask

	def _supports_color(self, stream: TextIO) -> bool:
		if not self.use_color or not getattr(stream, "isatty", lambda: False)():
			return False
		return not sys.platform.startswith("win32") or any(v in os.environ for v in _WINDOWS_ANSI_HOSTS)

	def _write(self, text: str, level: Level) -> None:
		stream = self.err if level.is_error else self.out
		if self._supports_color(stream):
			text = cl_s(text, level.style)
		try:
			stream.write(text)
		except UnicodeEncodeError:
			encoding = getattr(stream, "encoding", None) or "ascii"
			stream.write(text.encode(encoding, errors="backslashreplace").decode(encoding))
		stream.flush()

	def set_verbosity(self, verbosity: Union[int, Level]) -> None:
		"""
		Sets :py:attr:`min_level` directly from a level, or from the number of ``-v`` flags through
		:py:data:`VERBOSITY_LEVELS`.

		:raise ValueError: if a count is negative
		"""
		if isinstance(verbosity, Level):
			self.min_level = verbosity
		elif verbosity < 0:
			raise ValueError(f"verbosity must be non-negative, but received {verbosity!r}")
		else:
			self.min_level = VERBOSITY_LEVELS[min(verbosity, len(VERBOSITY_LEVELS) - 1)]

	def log(self, *msg: Any, level: Level = INFO, joiner: str = " ", end: str = "\n") -> None:
		"""
		Writes ``msg`` joined by ``joiner`` behind the tag of ``level``, if that level is enabled.

		:raise TypeError: if ``level`` is not a :py:class:`Level`
		"""
		if self.is_enabled(_check_level(level)):
			self._write(f"{level.prefix}{joiner.join(str(m) for m in msg)}{end}", level)

	def log_call(self, *msg: Any, level: Level = VERBOSE, include_arguments: bool = False) -> Callable[[_Func], _Func]:
		"""
		Decorator logging each call of the decorated function under its qualified name, followed by ``msg``. With
		``include_arguments`` the arguments are listed too, e.g. ``[cmd_bands <- RunConfig(...)] running command``.
		"""
		text = " ".join(str(m) for m in msg)

		def __decorator__(func: _Func) -> _Func:
			def __wrapper__(*args, **kwargs):
				if self.is_enabled(level):
					called = func.__qualname__
					if include_arguments and (args or kwargs):
						listed = [repr(a) for a in args] + [f"{k}={v!r}" for k, v in kwargs.items()]
						called += f" <- {', '.join(listed)}"
					self.log(f"[{called}] {text}", level=level)
				return func(*args, **kwargs)

			return copy_func_attrs(__wrapper__, func, "logged")

		return __decorator__

	def __repr__(self) -> str:
		return repr_str(self, Logger.min_level, Logger.level_mask, include_empty_sized=False, value_function=str)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ DEFAULT LOGGER INSTANCE ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

DEFAULT_LOGGER: Final[Logger] = Logger()
""" The logger shared by all :py:mod:`HillGap` modules, silent below :py:data:`WARNING` until ``-v`` is given. """
log: Final = DEFAULT_LOGGER.log
log_call: Final = DEFAULT_LOGGER.log_call
set_verbosity: Final = DEFAULT_LOGGER.set_verbosity
