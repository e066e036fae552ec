"""Exception hierarchy shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can emit
``ERROR <code>: message`` lines on stderr.
"""


class ParetofolioError(Exception):
    code = "GENERIC"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)


# --- data ingestion / estimation ---

class MalformedRow(ParetofolioError):
    """A CSV row could not be parsed."""

    code = "MALFORMED_ROW"

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class EmptyFrame(ParetofolioError):
    code = "EMPTY_FRAME"


class TooFewRows(ParetofolioError):
    code = "TOO_FEW_ROWS"


class TooFewObservations(ParetofolioError):
    code = "TOO_FEW_OBSERVATIONS"


class ZeroMarketVariance(ParetofolioError):
    code = "ZERO_MARKET_VARIANCE"


class KTooLarge(ParetofolioError):
    code = "K_TOO_LARGE"


# --- portfolio evaluation ---

class DimensionMismatch(ParetofolioError):
    code = "DIMENSION_MISMATCH"


class ZeroVolatility(ParetofolioError):
    code = "ZERO_VOLATILITY"

    def __init__(self, message: str = "", annual_return_pct: float | None = None):
        self.annual_return_pct = annual_return_pct
        super().__init__(message)


class SolverFailure(ParetofolioError):
    code = "SOLVER_FAILURE"


# --- evolutionary machinery ---

class UnevaluatedPoint(ParetofolioError):
    code = "UNEVALUATED_POINT"


class PopulationTooSmall(ParetofolioError):
    code = "POPULATION_TOO_SMALL"


class NoReferencePoints(ParetofolioError):
    code = "NO_REFERENCE_POINTS"


class NoDirections(ParetofolioError):
    code = "NO_DIRECTIONS"


# --- surrogate ---

class SingularKernel(ParetofolioError):
    code = "SINGULAR_KERNEL"


# --- indicators ---

class DegenerateBounds(ParetofolioError):
    code = "DEGENERATE_BOUNDS"


class MismatchedLengths(ParetofolioError):
    code = "MISMATCHED_LENGTHS"


# --- backtest ---

class MissingTicker(ParetofolioError):
    code = "MISSING_TICKER"


class EmptyWindow(ParetofolioError):
    code = "EMPTY_WINDOW"


class WindowMismatch(ParetofolioError):
    code = "WINDOW_MISMATCH"
