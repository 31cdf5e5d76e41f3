from dataclasses import dataclass, field
from typing import List


@dataclass(frozen=True)
class Check:
    """
    One numerical comparison. relation is one of 'le', 'gt', 'eq', 'close'.
    """
    description: str
    measured: float
    expected: float
    tolerance: float
    relation: str

    @property
    def passed(self) -> bool:
        match self.relation:
            case 'le':
                return self.measured <= self.expected
            case 'gt':
                return self.measured > self.expected
            case 'eq':
                return self.measured == self.expected
            case 'close':
                return abs(self.measured - self.expected) <= self.tolerance
            case _:
                raise ValueError(f"Unknown relation: {self.relation}")

    @staticmethod
    def at_most(description: str, measured: float, bound: float) -> 'Check':
        return Check(description, float(measured), float(bound), 0.0, 'le')

    @staticmethod
    def above(description: str, measured: float, bound: float) -> 'Check':
        return Check(description, float(measured), float(bound), 0.0, 'gt')

    @staticmethod
    def equal(description: str, measured, expected) -> 'Check':
        return Check(description, int(measured), int(expected), 0.0, 'eq')

    @staticmethod
    def close(description: str, measured: float, expected: float, tolerance: float) -> 'Check':
        return Check(description, float(measured), float(expected), tolerance, 'close')

    def to_dict(self) -> dict:
        return {
            'description': self.description,
            'measured': self.measured,
            'expected': self.expected,
            'tolerance': self.tolerance,
            'relation': self.relation,
            'pass': self.passed,
        }


@dataclass
class TheoremReport:
    theorem_id: str
    d: int | None
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, check: Check) -> None:
        self.checks.append(check)

    def to_dict(self) -> dict:
        return {
            'theorem': self.theorem_id,
            'd': self.d,
            'pass': self.passed,
            'checks': [check.to_dict() for check in self.checks],
        }
