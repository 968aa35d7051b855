"""Size guards for the exponential routines.

Setting ``HYPERMATCH_GUARD_OVERRIDE=1`` disables every guard. That is unsafe:
the guarded routines are exponential in the instance size.
"""

import os

OVERRIDE_ENV = "HYPERMATCH_GUARD_OVERRIDE"

MAX_EDGES_COUNT = 64
MAX_OMEGA_ENUMERATE = 10**6
MAX_OMEGA_TRANSITIONS = 5000
MAX_OMEGA_CONDUCTANCE = 22
MAX_OMEGA_PATHS = 2000


class GuardError(RuntimeError):
    """An exponential routine refused an instance above its size limit."""

    def __init__(self, guard: str, size, limit):
        self.guard = guard
        self.size = size
        self.limit = limit
        super().__init__(f"guard {guard!r} refused: size {size} exceeds limit {limit}")


def overridden() -> bool:
    return os.environ.get(OVERRIDE_ENV) == "1"


def check(guard: str, size, limit) -> None:
    if limit is not None and size > limit and not overridden():
        raise GuardError(guard, size, limit)
