"""
:Date: 04.02.2026

..	versionadded:: v0.1.0
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

from __future__ import annotations

import abc
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Final, Iterable, List, Optional, Sequence, TypeVar, Union

from HillGap.HGLogger import log, WARNING

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

_T: Final = TypeVar("_T")
""" Generic type variable for use in the :py:mod:`HGUtils` module. """
_R: Final = TypeVar("_R")

THREADS_ENV: Final[str] = "HILLGAP_THREADS"
""" Environment variable capping the number of worker threads of every parameter sweep. """

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ EXCEPTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class HillGapError(Exception):
	"""
	:py:class:`HillGapError` is the base class for all errors raised by :py:mod:`HillGap`.

	:param msg: the message of the error
	:param context: keyword arguments describing the values involved, rendered after the message
	"""

	def __init__(self, msg: str, **context: Any):
		super(HillGapError, self).__init__(msg)
		self.msg = msg
		self.context = dict(context)

	def __str__(self) -> str:
		if len(self.context) == 0:
			return str(self.msg)
		return f"{self.msg} ({', '.join(f'{k}={v!r}' for k, v in self.context.items())})"

class PreconditionError(HillGapError, ValueError):
	""" Raised when the inputs of an operation violate its preconditions. The command line maps it to exit code 1. """
	pass

class NumericalError(HillGapError, ArithmeticError):
	""" Raised when a numerical procedure fails to deliver a trustworthy result. The command line maps it to exit code 2. """
	pass

class ImmutableError(AttributeError):
	""" Raised when an attribute of an :py:class:`Immutable` instance is set or deleted after construction. """
	pass

class ConfigError(HillGapError, SyntaxError):
	"""
	Raised for unreadable or invalid configuration files. Like :py:class:`SyntaxError` it carries ``filename``,
	``lineno``, ``offset`` and ``text``, so unknown keys and malformed values are reported with their line.
	"""

	def __init__(self,
				 msg: str,
				 file_path: Union[str, os.PathLike],
				 lineno: Optional[int],
				 offset: Optional[int] = None,
				 code_context: Optional[str] = None):
		HillGapError.__init__(self, msg)
		SyntaxError.__init__(self, msg, (os.fspath(file_path), lineno, offset, code_context))

	def __str__(self) -> str:
		where = f"{self.filename}:{self.lineno}" if self.lineno is not None else str(self.filename)
		return f"{where}: {self.msg}"

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMMUTABLE ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

class ImmutableMeta(abc.ABCMeta):
	""" Locks every instance once its ``__init__`` has returned. """

	def __call__(cls, *args, **kwargs):
		instance = super().__call__(*args, **kwargs)
		object.__setattr__(instance, "_locked", True)
		return instance

class Immutable(abc.ABC, metaclass=ImmutableMeta):
	"""
	Base class of objects whose attributes cannot be set or deleted after construction. Models, pairs and all result
	objects of :py:mod:`HillGap` are immutable, so they can be shared between the worker threads of a sweep.
	"""

	def __setattr__(self, name: str, value: Any) -> None:
		if getattr(self, "_locked", False):
			raise ImmutableError(f"cannot set {name!r} of immutable {type(self).__name__!r}")
		super().__setattr__(name, value)

	def __delattr__(self, name: str) -> None:
		if getattr(self, "_locked", False):
			raise ImmutableError(f"cannot delete {name!r} of immutable {type(self).__name__!r}")
		super().__delattr__(name)

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def thread_count() -> int:
	"""
	:return: the worker cap read from :py:data:`THREADS_ENV`, 1 if the variable is unset or invalid
	"""
	raw = os.environ.get(THREADS_ENV)
	if raw is None or raw.strip() == "":
		return 1
	try:
		n = int(raw)
	except ValueError:
		n = 0
	if n < 1:
		log(f"[thread_count] ignoring {THREADS_ENV}={raw!r}, expected a positive integer", level=WARNING)
		return 1
	return n

def parallel_map(func: Callable[[_T], _R], items: Iterable[_T], max_workers: Optional[int] = None) -> List[_R]:
	"""
	Applies ``func`` to every item, in parallel threads if :py:data:`THREADS_ENV` allows it. The output order always
	matches the input order, so results assembled from it are deterministic.

	:param func: the function to apply, must be thread-safe
	:param items: the inputs
	:param max_workers: an additional cap on the number of workers
	:return: the list of results
	"""
	items: Sequence[_T] = list(items)
	workers = thread_count() if max_workers is None else min(thread_count(), max_workers)
	if workers <= 1 or len(items) <= 1:
		return [func(item) for item in items]
	with ThreadPoolExecutor(max_workers=workers) as executor:
		return list(executor.map(func, items))
