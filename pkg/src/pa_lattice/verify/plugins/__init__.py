from .approx_checks import ApproxChecks
from .complex_checks import ComplexChecks
from .expr_checks import ExprChecks
from .family_checks import FamilyChecks

__all__ = ["ApproxChecks", "ComplexChecks", "ExprChecks", "FamilyChecks", "default_plugins"]


def default_plugins():
    return [ExprChecks(), ComplexChecks(), FamilyChecks(), ApproxChecks()]
