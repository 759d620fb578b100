"""websentinel: real-time website risk scoring.

URL/content/session feature extraction, a six-model scoring ensemble,
a TTL reputation cache, and an HTTP verdict service.
"""

__version__ = "0.1.0"

from .manifest import FEATURE_NAMES, N_FEATURES

__all__ = ["FEATURE_NAMES", "N_FEATURES", "__version__"]
