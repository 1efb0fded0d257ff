"""
:Date: 05.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import csv
import enum
import json
import math
import os
import re
import sys
import tomllib
from getopt import gnu_getopt, GetoptError
from typing import Any, Callable, Collection, Dict, Final, Iterable, Iterator, List, Mapping, Optional, Sequence, \
	TextIO, Union

import numpy as np

from HillGap.HGPrinting import repr_str
from HillGap.HGUtils import ConfigError

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

_REAL_PATTERN: Final = re.compile(r"^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*"
								  r"(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$")
""" Matches ``1.5``, ``pi``, ``-2pi``, ``3*pi/4``, ``pi/2`` and ``1/3``. """

_TOML_LINE_PATTERN: Final = re.compile(r"at line (\d+), column (\d+)")

ConfigSchema = Mapping[str, Mapping[str, Callable[[Any], Any]]]
""" Maps section names to the allowed keys and a converter for each key's value. """

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ CLASSES ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class ConsoleArgsError(Exception):
	""" Raised by :py:class:`ConsoleArguments` for command lines that cannot be parsed. """

	def __init__(self, msg: str, arguments: Collection[str]):
		super().__init__(msg)
		self.msg = msg
		self.arguments = list(arguments)

	def __str__(self) -> str:
		return f"{self.msg} (in {' '.join(self.arguments)!r})"

class ConsoleArguments:
	"""
	Parsed command line of ``hillgap``. Options and positional parameters may be mixed in GNU style, so ``hillgap
	bands --family mathieu`` and ``hillgap --family mathieu bands`` are the same.

	Long options listed in ``multi_value`` consume that many of the following arguments (``--range -1 5``). They are
	joined with commas before ``getopt`` runs, so negative numbers are never taken for flags.

	:param short: single letters, a trailing ``:`` marks a flag that takes a value
	:param long: long option names, a trailing ``=`` marks an option that takes a value
	:param argv: the arguments to parse, ``sys.argv[1:]`` if ``None``
	:param multi_value: long option names mapped to the number of values they take
	:param no_load: only validate the option names, do not parse

	:raise ValueError: if a short and a long option share a name
	:raise ConsoleArgsError: if ``argv`` does not parse
	"""

	def __init__(self,
				 short: Iterable[str],
				 long: Iterable[str],
				 argv: Optional[Sequence[str]] = None,
				 *,
				 multi_value: Optional[Mapping[str, int]] = None,
				 no_load: bool = False):
		self._short = "".join(short)
		self._long = list(long)
		clashes = set(self._short.replace(":", "")) & {name.rstrip("=") for name in self._long}
		if clashes:
			raise ValueError(f"short and long options must have distinct names, but {sorted(clashes)} are both")

		self._multi_value = dict(multi_value or {})
		self._argv = list(sys.argv[1:] if argv is None else argv)
		self._options: Dict[str, List[str]] = {}
		self._pars: List[str] = []
		if not no_load:
			self._parse()

	def _join_multi_values(self) -> List[str]:
		joined, rest = [], list(self._argv)
		while rest:
			arg = rest.pop(0)
			name = arg[2:]
			if arg.startswith("--") and name in self._multi_value:
				n = self._multi_value[name]
				if len(rest) < n:
					raise ConsoleArgsError(f"option '--{name}' takes {n} values, but received {len(rest)}",
										   [arg, *rest])
				arg, rest = f"--{name}={','.join(rest[:n])}", rest[n:]
			joined.append(arg)
		return joined

	def _parse(self) -> None:
		argv = self._join_multi_values()
		try:
			options, self._pars = gnu_getopt(argv, self._short, self._long)
		except GetoptError as e:
			raise ConsoleArgsError(f"cannot parse the command line: {e.msg}", argv) from e
		for flag, value in options:
			self._options.setdefault(flag.lstrip("-"), []).append(value)

	@property
	def pars(self) -> Iterator[str]:
		""" The positional parameters in order. """
		return iter(self._pars)

	def count(self, *keys: str) -> int:
		""" :return: how often any of ``keys`` was given, e.g. ``count("v", "verbose")`` for ``-v -v`` """
		return sum(len(self._options.get(k, ())) for k in keys)

	def get(self, *keys: str, default: Optional[str] = None) -> Optional[str]:
		""" :return: the value of the first of ``keys`` that was given, ``default`` otherwise """
		return next((self[k] for k in keys if k in self), default)

	def values(self, key: str) -> List[str]:
		""" :return: the values of a multi-value option """
		return self[key].split(",")

	def __contains__(self, options: Union[int, str, List[Union[int, str]]]) -> bool:
		"""
		Integers test for a positional parameter at that index, strings for a flag, lists for all of their entries.

		:raise TypeError: for any other type
		"""
		if isinstance(options, list):
			return all(o in self for o in options)
		if isinstance(options, str):
			return options in self._options
		if isinstance(options, int) and not isinstance(options, bool):
			return 0 <= options < len(self._pars)
		raise TypeError(f"expected 'int', 'str' or 'list', but received {type(options).__name__!r}")

	def __getitem__(self, key: Union[int, str]) -> str:
		"""
		:return: the last value given for a flag, or the positional parameter at an index
		:raise KeyError: if the flag was not given or the index does not exist
		"""
		if isinstance(key, str):
			if key in self._options:
				return self._options[key][-1]
		elif isinstance(key, int):
			if -len(self._pars) <= key < len(self._pars):
				return self._pars[key]
		else:
			raise TypeError(f"expected 'int' or 'str', but received {type(key).__name__!r}")
		raise KeyError(f"{key!r} was not given on the command line")

	def __len__(self) -> int:
		return len(self._options) + len(self._pars)

	def __repr__(self) -> str:
		return repr_str(self, ConsoleArguments.pars, options={k: v[-1] for k, v in self._options.items()})

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def parse_real(value: Union[str, int, float]) -> float:
	"""
	Parses a real number, accepting multiples and fractions of pi: ::

		parse_real("pi/2")   # 1.5707963267948966
		parse_real("-2pi")   # -6.283185307179586
		parse_real("1e-10")  # 1e-10

	:raise ValueError: if the value cannot be read as real number
	"""
	if isinstance(value, bool):
		raise ValueError(f"expected a real number, but received {value!r}")
	if isinstance(value, (int, float)):
		return float(value)
	match = _REAL_PATTERN.match(str(value).lower())
	if match is None or (match.group(2) is None and match.group(3) is None):
		raise ValueError(f"expected a real number or multiple of pi, but received {value!r}")
	sign, number, pi, denominator = match.groups()
	result = float(number) if number is not None else 1.0
	if pi is not None:
		result *= math.pi
	if denominator is not None:
		result /= float(denominator)
	return -result if sign == "-" else result

def _find_line(text: str, section: Optional[str], key: Optional[str]) -> Optional[int]:
	""" :return: the 1-based line at which ``key`` is assigned in ``[section]``, or the section header itself """
	current = None
	section_line = None
	for n, line in enumerate(text.splitlines(), start=1):
		stripped = line.strip()
		if stripped.startswith("[") and stripped.endswith("]"):
			current = stripped.strip("[] \t")
			if current == section:
				section_line = n
			continue
		if key is not None and current == section and re.match(rf"^\s*{re.escape(key)}\s*=", line):
			return n
	return section_line

def load_config(path: Union[str, os.PathLike], schema: ConfigSchema) -> Dict[str, Dict[str, Any]]:
	"""
	Reads a TOML configuration file and validates it against ``schema``. Every section and key must be declared in the
	schema, every value is passed through the converter of its key. A minimal file: ::

		[base]
		family = "mathieu"
		gamma = 1.0

		[run]
		command = "bands"
		lambda_min = -1
		lambda_max = 5

	:param path: the file to read
	:param schema: the allowed sections and keys
	:return: the converted values by section
	:raise ConfigError: if the file cannot be read or parsed, or contains unknown or malformed entries
	"""
	try:
		with open(path, "r", encoding="utf-8") as f:
			text = f.read()
	except OSError as e:
		raise ConfigError(f"cannot read config file: {e.strerror}", path, None) from e

	try:
		raw = tomllib.loads(text)
	except tomllib.TOMLDecodeError as e:
		match = _TOML_LINE_PATTERN.search(str(e))
		lineno, offset = (int(match.group(1)), int(match.group(2))) if match else (None, None)
		context = text.splitlines()[lineno - 1] if lineno is not None and lineno <= len(text.splitlines()) else None
		raise ConfigError(f"invalid TOML: {e}", path, lineno, offset, context) from e

	result: Dict[str, Dict[str, Any]] = {}
	for section, entries in raw.items():
		if section not in schema or not isinstance(entries, dict):
			lineno = _find_line(text, section, None) or _find_line(text, None, section)
			raise ConfigError(f"unknown section {section!r}, expected one of {sorted(schema)}", path, lineno)
		converted = {}
		for key, value in entries.items():
			lineno = _find_line(text, section, key)
			if key not in schema[section]:
				raise ConfigError(f"unknown key {key!r} in section [{section}], expected one of "
								  f"{sorted(schema[section])}", path, lineno)
			try:
				converted[key] = schema[section][key](value)
			except (TypeError, ValueError) as e:
				raise ConfigError(f"invalid value for {section}.{key}: {e}", path, lineno) from e
		result[section] = converted
	return result

def json_ready(obj: Any) -> Any:
	"""
	Converts result objects into JSON-compatible values. Objects with a ``to_json_dict`` method are expanded, numpy
	values become Python values, complex numbers become ``[re, im]`` and non-finite floats become the strings
	``"inf"``, ``"-inf"`` and ``"nan"``.
	"""
	if hasattr(obj, "to_json_dict"):
		return json_ready(obj.to_json_dict())
	if obj is None or isinstance(obj, (bool, str)):
		return obj
	if isinstance(obj, enum.Enum):
		return json_ready(obj.value)
	if isinstance(obj, np.bool_):
		return bool(obj)
	if isinstance(obj, (int, np.integer)):
		return int(obj)
	if isinstance(obj, (float, np.floating)):
		obj = float(obj)
		if math.isnan(obj):
			return "nan"
		if math.isinf(obj):
			return "inf" if obj > 0 else "-inf"
		return obj
	if isinstance(obj, (complex, np.complexfloating)):
		return [json_ready(obj.real), json_ready(obj.imag)]
	if isinstance(obj, np.ndarray):
		return [json_ready(v) for v in obj.tolist()]
	if isinstance(obj, Mapping):
		return {str(k): json_ready(v) for k, v in obj.items()}
	if isinstance(obj, Iterable):
		return [json_ready(v) for v in obj]
	raise TypeError(f"Cannot convert object of type {obj.__class__.__name__!r} to JSON")

def json_str(obj: Any) -> str:
	""" :return: the deterministic JSON text of ``obj`` (sorted keys, two-space indent) """
	return json.dumps(json_ready(obj), sort_keys=True, indent=2, allow_nan=False)

def write_json(obj: Any, path: Optional[Union[str, os.PathLike]] = None, stream: Optional[TextIO] = None) -> None:
	"""
	Writes ``obj`` as JSON to ``path``, or to ``stream`` (``sys.stdout`` by default) if no path is given.
	"""
	text = json_str(obj) + "\n"
	if path is not None:
		with open(path, "w", encoding="utf-8", newline="\n") as f:
			f.write(text)
	else:
		(sys.stdout if stream is None else stream).write(text)

def write_csv(path: Union[str, os.PathLike], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
	"""
	Writes a trace as CSV with a header row. Floats are written with full precision.
	"""
	with open(path, "w", encoding="utf-8", newline="") as f:
		writer = csv.writer(f)
		writer.writerow(header)
		for row in rows:
			writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
