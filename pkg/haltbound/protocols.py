"""Protocol classes used by haltbound."""

import abc

from typing_extensions import Protocol


class Overhead(Protocol):
    """A protocol for self-delimiting overhead functions.

    An overhead function ``g`` maps a program size ``n`` (bits) to the extra
    number of bits a self-delimiting encoding of that program costs. It must
    be total on the positive integers, monotone non-decreasing, and satisfy
    ``g(n) < n`` for every ``n >= 8``.

    """

    @abc.abstractmethod
    def __call__(self, n: int) -> int:
        """Return the overhead in bits for a program of `n` bits."""
