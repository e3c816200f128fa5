from .base import CheckResult, VerifyResult
from .runner import VerifyRunner, detect_kind

__all__ = ["CheckResult", "VerifyResult", "VerifyRunner", "detect_kind"]
