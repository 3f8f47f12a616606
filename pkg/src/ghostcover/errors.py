class BudgetExceeded(RuntimeError):
    """A search space is larger than the configured cap.  Nothing is sampled."""

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"{what}: {needed} candidates exceed the budget of {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap


class DomainError(ValueError):
    pass
