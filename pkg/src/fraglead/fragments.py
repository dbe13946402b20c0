"""Symbol-level fragments of a SMILES token sequence.

A fragment is a contiguous window of tokens; its rendering is therefore a
contiguous character substring of the parent string.  Fragments need not
be syntactically valid SMILES on their own — a window may happily start
with ``)`` or cut a ring pair in half — because search backends treat them
as plain query strings.
"""

from __future__ import annotations

from dataclasses import dataclass

from fraglead.errors import LengthOutOfRange, ScheduleExceedsLength
from fraglead.smiles import TokenSequence

_MASK64 = (1 << 64) - 1


class Splitmix64:
    """Tiny fixed pseudo-random generator (the splitmix64 mixer).

    Used instead of :mod:`random` so sampled fragment tables stay
    bit-identical across platforms and interpreter versions.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` via rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


@dataclass(frozen=True)
class Fragment:
    """A window of ``length`` consecutive tokens starting at token index
    ``start`` of ``parent``."""

    parent: TokenSequence
    start: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise LengthOutOfRange(f"fragment length {self.length} < 1")
        if self.start < 0 or self.start + self.length > len(self.parent):
            raise LengthOutOfRange(
                f"window [{self.start}, {self.start + self.length}) exceeds "
                f"{len(self.parent)} tokens"
            )

    @property
    def text(self) -> str:
        return "".join(t.text for t in self.parent.tokens[self.start : self.start + self.length])


@dataclass(frozen=True)
class SizeSchedule:
    """Arithmetic progression of fragment sizes: min, min+step, ... <= max."""

    min_size: int
    max_size: int
    step: int = 1

    def __post_init__(self):
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")
        if self.min_size > self.max_size:
            raise ValueError("min_size must not exceed max_size")
        if self.step < 1:
            raise ValueError("step must be >= 1")

    def sizes(self) -> list[int]:
        return list(range(self.min_size, self.max_size + 1, self.step))

    @classmethod
    def from_string(cls, text: str) -> "SizeSchedule":
        """Parse a ``min:max:step`` string (step defaults to 1)."""
        parts = text.split(":")
        if len(parts) not in (2, 3) or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"expected min:max[:step], got {text!r}")
        numbers = [int(p) for p in parts]
        step = numbers[2] if len(numbers) == 3 else 1
        return cls(numbers[0], numbers[1], step)

    def __str__(self) -> str:
        return f"{self.min_size}:{self.max_size}:{self.step}"


def windows(tokens: TokenSequence, length: int) -> list[Fragment]:
    """All contiguous windows of ``length`` tokens, in ascending start order."""
    count = len(tokens)
    if not 1 <= length <= count:
        raise LengthOutOfRange(
            f"window length {length} outside [1, {count}]"
        )
    return [Fragment(tokens, start, length) for start in range(count - length + 1)]


def sample(tokens: TokenSequence, schedule: SizeSchedule, seed: int) -> list[Fragment]:
    """One uniformly chosen window per schedule size.

    Each size gets an independent draw from a splitmix64 stream seeded with
    ``seed``, so the same (tokens, schedule, seed) triple always returns
    identical fragments.
    """
    count = len(tokens)
    if schedule.max_size > count:
        raise ScheduleExceedsLength(
            f"schedule max {schedule.max_size} exceeds {count} tokens"
        )
    rng = Splitmix64(seed)
    picks = []
    for size in schedule.sizes():
        start = rng.below(count - size + 1)
        picks.append(Fragment(tokens, start, size))
    return picks


def render(fragment: Fragment) -> str:
    """The fragment's text, ready to use as a literal search query."""
    return fragment.text
