"""Operation tallies for the four costed primitives: pairings (bp), G1 scalar
multiplications (sm), G2 exponentiations (exp) and hash-to-scalar calls (hash).

A counter object is passed explicitly into the operations of one measurement
region; there is no global instrumentation state.
"""

from dataclasses import dataclass


@dataclass
class OpCounters:
    bp: int = 0
    sm: int = 0
    exp: int = 0
    hash: int = 0

    def reset(self) -> None:
        self.bp = self.sm = self.exp = self.hash = 0

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.bp, self.sm, self.exp, self.hash)

    def __add__(self, other: "OpCounters") -> "OpCounters":
        return OpCounters(
            self.bp + other.bp,
            self.sm + other.sm,
            self.exp + other.exp,
            self.hash + other.hash,
        )
