"""
:Date: 03.02.2026

..	versionadded:: v0.1.0

Small decorators shared by the command line and the acceptance bundles.
"""

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ IMPORTS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

import time
from typing import Callable, Final, Tuple, TypeVar

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ GLOBALS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

WRAPPER_PREFIX: Final[str] = "wrapped"
""" Leading part of the ``__name__`` given to every wrapper built in :py:mod:`HillGap`. """

_R = TypeVar("_R")

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ FUNCTIONS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def copy_func_attrs(wrapper: Callable[..., _R], wrapped: Callable, tag: str) -> Callable[..., _R]:
	"""
	Makes ``wrapper`` look like ``wrapped`` to introspection and Sphinx. The qualified name, module, docstring and
	annotations are taken over, the plain name becomes ``wrapped_<tag>_<name>`` so that tracebacks still show which
	decorator is involved.

	:return: ``wrapper`` itself
	"""
	name = getattr(wrapped, "__name__", type(wrapped).__name__)
	wrapper.__name__ = f"{WRAPPER_PREFIX}_{tag}_{name}"
	wrapper.__qualname__ = getattr(wrapped, "__qualname__", name)
	wrapper.__module__ = getattr(wrapped, "__module__", wrapper.__module__)
	wrapper.__doc__ = getattr(wrapped, "__doc__", None)
	wrapper.__annotations__ = dict(getattr(wrapped, "__annotations__", {}))
	wrapper.__wrapped__ = wrapped
	return wrapper

# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~ DECORATORS ~~~~~~~~~~~~~~~
# ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

def timed_return(func: Callable[..., _R]) -> Callable[..., Tuple[_R, float]]:
	"""
	Pairs the result of every call with its wall clock duration in seconds, measured with
	:py:func:`time.perf_counter`. Nothing is printed: ::

		@timed_return
		def check_mathieu_edges(seed):
			...

		(passed, detail), seconds = check_mathieu_edges(0)

	Exceptions propagate unchanged and carry no timing.
	"""

	def __wrapper__(*args, **kwargs):
		started = time.perf_counter()
		value = func(*args, **kwargs)
		return value, time.perf_counter() - started

	return copy_func_attrs(__wrapper__, func, "timed")
