"""
Core record types for the protocol engines and the verification harness.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple


class ReportStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


class EntanglingMode(Enum):
    DIRECT = "direct"
    BUS = "bus"


@dataclass
class Report:
    """Outcome of one verification case"""
    check: str
    status: ReportStatus
    max_residual: float
    tolerance: float
    params: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    message: Optional[str] = None

    @classmethod
    def from_residual(cls, check: str, residual: float, tolerance: float,
                      params: Optional[dict] = None, wall_time: float = 0.0) -> "Report":
        """Status is pass iff residual < tolerance (NaN fails)"""
        residual = float(residual)
        status = ReportStatus.PASS if residual < tolerance else ReportStatus.FAIL
        return cls(check, status, residual, tolerance, dict(params or {}), wall_time)

    @classmethod
    def from_error(cls, check: str, error: Exception, tolerance: float,
                   params: Optional[dict] = None, wall_time: float = 0.0) -> "Report":
        return cls(check, ReportStatus.ERROR, float('inf'), tolerance, dict(params or {}),
                   wall_time, message=f"{type(error).__name__}: {error}")

    @property
    def passed(self) -> bool:
        return self.status is ReportStatus.PASS

    def to_dict(self, include_timing: bool = False) -> dict:
        """Convert to dictionary for serialization"""
        data = {
            'check': self.check,
            'status': self.status.value,
            'max_residual': self.max_residual if self.max_residual != float('inf') else None,
            'tolerance': self.tolerance,
            'params': self.params,
        }
        if self.message:
            data['message'] = self.message
        if include_timing:
            data['wall_time'] = round(self.wall_time, 6)
        return data


@dataclass
class ByproductFrame:
    """
    Pauli byproduct X^x Z^z carried by a stored qubit.

    The stored state equals X^x Z^z applied to the logical state (up to phase).
    """
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.x not in (0, 1) or self.z not in (0, 1):
            raise ValueError(f"Frame exponents must be bits, got ({self.x}, {self.z})")

    def copy(self) -> "ByproductFrame":
        return ByproductFrame(self.x, self.z)

    def propagate_h(self) -> None:
        """H X = Z H and H Z = X H: the exponents trade places"""
        self.x, self.z = self.z, self.x

    def apply_x(self, bit: int = 1) -> None:
        self.x ^= bit

    def apply_z(self, bit: int = 1) -> None:
        self.z ^= bit

    def adapt_angle(self, theta: float) -> float:
        """X byproduct flips the sign of the next equatorial angle; Z commutes with R_z"""
        return -theta if self.x else theta

    def to_tuple(self) -> Tuple[int, int]:
        return (self.x, self.z)


@dataclass
class CycleRecord:
    """One memory/flying-register cycle of the quantum wire"""
    theta: float
    adapted_theta: float
    basis: str
    outcome: int
    probability: float
    frame_after: Tuple[int, int]

    def to_dict(self) -> dict:
        return {
            'theta': self.theta,
            'adapted_theta': self.adapted_theta,
            'basis': self.basis,
            'outcome': self.outcome,
            'probability': self.probability,
            'frame_after': list(self.frame_after),
        }


@dataclass
class ProtocolTrace:
    """Ordered cycle records of a wire run"""
    cycles: List[CycleRecord] = field(default_factory=list)

    def append(self, record: CycleRecord) -> None:
        if record.outcome not in (0, 1):
            raise ValueError(f"Outcome must be 0 or 1, got {record.outcome}")
        self.cycles.append(record)

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def outcomes(self) -> List[int]:
        return [c.outcome for c in self.cycles]

    @property
    def angles(self) -> List[float]:
        return [c.theta for c in self.cycles]

    def to_dict(self) -> dict:
        return {'cycles': [c.to_dict() for c in self.cycles]}


@dataclass
class EntanglingRecord:
    """Two-memory entangling step; sigma is the S-power correction per memory (0 for direct)"""
    mode: EntanglingMode
    outcome: Optional[int]
    probability: float
    sigma: int

    def to_dict(self) -> dict:
        return {
            'mode': self.mode.value,
            'outcome': self.outcome,
            'probability': self.probability,
            'sigma': self.sigma,
        }
