"""Exception types. Each carries a short machine-readable ``code``."""


class EllinvError(Exception):
    code = "error"

    def __init__(self, *args, code=None):
        super().__init__(*args)
        if code is not None:
            self.code = code


class NotPrime(EllinvError, ValueError):
    code = "not_prime"


class DegreeZero(EllinvError, ValueError):
    code = "degree_zero"


class SingularCurve(EllinvError, ValueError):
    code = "singular_curve"


class PointNotOnCurve(EllinvError, ValueError):
    code = "point_not_on_curve"


class AmbiguousOrder(EllinvError, RuntimeError):
    code = "ambiguous_order"


class TorsionNotRational(EllinvError, ValueError):
    code = "torsion_not_rational"


class IncompatibleJ(EllinvError, ValueError):
    code = "incompatible_j"


class RootOfUnityMissing(EllinvError, ValueError):
    code = "root_of_unity_missing"


class UnsupportedCharacteristic(EllinvError, ValueError):
    code = "unsupported_characteristic"


class InvalidInput(EllinvError, ValueError):
    code = "invalid_input"


class BudgetExceeded(EllinvError, RuntimeError):
    code = "budget_exceeded"


class NotHomogeneous(EllinvError, ValueError):
    code = "not_homogeneous"


class LengthMismatch(EllinvError, ValueError):
    code = "length_mismatch"


class NotAdditiveSubgroup(EllinvError, ValueError):
    code = "not_additive_subgroup"


class PoleAtIdentity(EllinvError, ValueError):
    code = "pole_at_identity"


class PoleHit(EllinvError, ValueError):
    """A function was evaluated at one of its poles."""
    code = "pole_hit"


class NotSumZero(EllinvError, ValueError):
    code = "not_sum_zero"


class DegeneratePoints(EllinvError, ValueError):
    code = "degenerate_points"


class NotNormal(EllinvError, ValueError):
    code = "not_normal"


class NoSplitEmbedding(EllinvError, ValueError):
    code = "no_split_embedding"


class OrderDividesL(EllinvError, ValueError):
    code = "order_divides_l"


class CapExceeded(EllinvError, RuntimeError):
    code = "cap_exceeded"


class OrderMismatch(EllinvError, RuntimeError):
    code = "order_mismatch"


class BadCharacteristic(EllinvError, ValueError):
    code = "bad_characteristic"


class EnumerationMissing(EllinvError, ValueError):
    code = "enumeration_missing"


class TooManyPoleRetries(EllinvError, RuntimeError):
    code = "too_many_pole_retries"


class RankDeficientSampling(EllinvError, RuntimeError):
    code = "rank_deficient_sampling"


class NonIntegralEndomorphism(EllinvError, ValueError):
    code = "non_integral_endomorphism"


class WrongModel(EllinvError, ValueError):
    code = "wrong_model"


class MissingOrbitData(EllinvError, ValueError):
    code = "missing_orbit_data"


class RankUnstable(EllinvError, RuntimeError):
    code = "rank_unstable"


class NonIntegralResult(EllinvError, ArithmeticError):
    code = "non_integral_result"


class ConfigError(EllinvError, ValueError):
    code = "config_error"
