class ConvergenceError(RuntimeError):
    """Raised when the QR iteration exhausts its sweep budget.

    ``source`` carries whatever provenance the caller attached (for ensemble
    members: kind, N, member index and chunk seed) so the failure can be
    replayed exactly.
    """

    def __init__(self, message, source=None):
        super().__init__(message)
        self.source = source


class DegenerateInputError(ValueError):
    """Distance requested between distributions that vanish below the floor."""
