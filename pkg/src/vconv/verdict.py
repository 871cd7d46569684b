from enum import Enum


class Verdict(str, Enum):
    """Outcome of a horizon-bounded quantifier check."""

    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {"holds": 0, "fails": 1, "inconclusive": 2}[self.value]

    def __str__(self):
        return self.value


STRENGTH = {Verdict.FAILS: 0, Verdict.INCONCLUSIVE: 1, Verdict.HOLDS: 2}
