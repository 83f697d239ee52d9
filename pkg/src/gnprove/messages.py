from enum import Enum, auto


class Status(Enum):
    PASSED = auto()
    FAILED = auto()
    UNVERIFIED = auto()
    UNDECIDED = auto()

    @property
    def label(self) -> str:
        return self.name.lower()

    @staticmethod
    def combine(statuses):
        """Worst of a collection: FAILED > UNVERIFIED > UNDECIDED > PASSED."""
        statuses = list(statuses)
        for s in (Status.FAILED, Status.UNVERIFIED, Status.UNDECIDED):
            if s in statuses:
                return s
        return Status.PASSED

    @staticmethod
    def from_label(text: str) -> 'Status':
        return Status[text.upper()]


class Stage(Enum):
    MATRICES = 'matrices'
    EQUATIONS = 'equations'
    RELATIONS = 'relations'
    AUTOMATA = 'automata'
    SLICE_RELATION = 'slice-relation'
    INDUCTION = 'induction'
    FINAL = 'final-polynomial'
    COMPARISON = 'closed-form'

    @staticmethod
    def from_label(text: str) -> 'Stage':
        return Stage(text)


# CLI exit codes
EXIT_CERTIFIED = 0
EXIT_INTERNAL = 1
EXIT_UNVERIFIED = 2
EXIT_USAGE = 64


def exit_code(status: Status) -> int:
    return EXIT_CERTIFIED if status is Status.PASSED else EXIT_UNVERIFIED
