"""drivebench: deterministic closed-loop driving evaluation at desk scale."""

__version__ = "0.1.0"

from drivebench.traffic.backend import stepping_backend

__all__ = ["stepping_backend", "__version__"]
