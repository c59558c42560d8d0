"""Exception types shared across the package."""


class ConvergenceFailure(Exception):
    """Dense eigensolver did not converge within its iteration budget."""


class GapClosed(Exception):
    """Bloch vector requested at a momentum where the band gap closes."""


class GapClosure(Exception):
    """Band construction hit degenerate eigenvalues on the momentum grid.

    Carries the offending quasi-momenta in ``k_samples``.
    """

    def __init__(self, k_samples):
        self.k_samples = list(k_samples)
        super().__init__(f"gap closes at {len(self.k_samples)} grid point(s)")


class OrthogonalLink(Exception):
    """A link overlap in a discrete geometric-phase product is (numerically) zero."""


class DegenerateCoin(Exception):
    """Critical scaling factor undefined: sin(theta1/2)*sin(theta2/2) = 0."""


class InvalidRegion(Exception):
    """Region boundary incompatible with the lattice size."""


class NoBracket(Exception):
    """Bisection requested on an interval where the predicate does not change."""


class CheckpointMismatch(Exception):
    """Checkpoint file does not match the sweep configuration."""
