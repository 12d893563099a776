"""Exception hierarchy shared across the package.

Every error raised by library code derives from :class:`OneclsError` so the
CLI can map library failures to exit code 1 while programming errors still
surface as ordinary tracebacks.
"""


class OneclsError(Exception):
    """Base class for all library errors."""


class LoadError(OneclsError):
    """CSV ingestion failed (I/O, parse, or schema problem)."""


class TargetClassNotFoundError(LoadError):
    """The requested target class does not occur in the label column."""

    def __init__(self, target_class, available):
        self.target_class = target_class
        self.available = sorted(available)
        super().__init__(
            f"target class {target_class!r} not found; "
            f"classes present: {self.available}"
        )


class StratificationError(OneclsError):
    """A class is too small to honor the requested split/fold layout."""


class ZeroVarianceError(OneclsError):
    """Scaling was requested but some features have zero variance."""

    def __init__(self, feature_indices):
        self.feature_indices = list(feature_indices)
        super().__init__(
            f"zero-variance feature(s) at indices {self.feature_indices}; "
            "cannot z-scale"
        )


class InfeasibleTradeoffError(OneclsError):
    """C < 1/N makes the sum-to-one constraint of the dual infeasible."""

    def __init__(self, C, n):
        self.C = C
        self.n = n
        super().__init__(
            f"C={C} is infeasible for N={n}: the dual requires sum(alpha)=1 "
            f"with 0 <= alpha_i <= C, so C must be >= 1/N = {1.0 / n:.6g}"
        )


class AsymmetricGramError(OneclsError):
    """The matrix handed to the dual solver is not symmetric."""


class BudgetExhaustedError(OneclsError):
    """The dual solver ran out of iterations before reaching a KKT point.

    Carries the best iterate found (`alpha`) and its residual KKT violation
    (`violation`) so callers can inspect or reuse the partial result.
    """

    def __init__(self, alpha, violation, n_updates):
        self.alpha = alpha
        self.violation = violation
        self.n_updates = n_updates
        super().__init__(
            f"dual solver exhausted its budget after {n_updates} pair updates "
            f"with max KKT violation {violation:.3e}"
        )


class DegenerateCovarianceError(OneclsError):
    """The projected covariance has no positive eigenvalue (all data zero)."""


class RankLossError(OneclsError):
    """The projection matrix lost row rank (or became non-finite).

    `iteration` is filled in by the training loop when the loss happens
    mid-fit; it stays None when raised from a direct call.
    """

    def __init__(self, message, iteration=None):
        self.iteration = iteration
        if iteration is not None:
            message = f"{message} (iteration {iteration})"
        super().__init__(message)


class DegenerateKernelError(OneclsError):
    """All centered-kernel eigenvalues were dropped (identical inputs)."""


class EmptyClassError(OneclsError):
    """Gmean was asked for on a fold with no positives or no negatives."""


class AllConfigsSkippedError(OneclsError):
    """Every grid configuration was skipped; carries the skip log."""

    def __init__(self, skipped):
        self.skipped = list(skipped)
        lines = "; ".join(f"{cfg}: {reason}" for cfg, reason in self.skipped[:5])
        more = "" if len(self.skipped) <= 5 else f" (+{len(self.skipped) - 5} more)"
        super().__init__(f"no grid configuration survived: {lines}{more}")
