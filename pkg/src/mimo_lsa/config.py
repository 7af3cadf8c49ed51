"""System configuration types and their validation rules."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import ConfigError

DEFAULT_SEED = 20130923


@dataclass(frozen=True)
class CoherenceBudget:
    """Training resources in one coherence block.

    With ``T`` training symbols over ``N_c`` coherent subcarriers at most
    ``N_c * T`` channels can be learnt per block.
    """

    T_c: int
    N_c: int
    T: int

    def __post_init__(self):
        for name in ("T_c", "N_c", "T"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"coherence.{name} must be >= 1", field=f"coherence.{name}")
        if self.T > self.T_c:
            raise ConfigError(f"T={self.T} exceeds T_c={self.T_c}", field="coherence.T")

    @property
    def capacity(self) -> int:
        return self.N_c * self.T

    def check_users(self, K: int) -> None:
        if K > self.capacity:
            raise ConfigError(f"K={K} exceeds N_c*T={self.capacity}", field="K")

    def orthogonal_pilot_load(self, K: int, B: int) -> float:
        """Fraction of the block that fully orthogonal pilots (K*B) would need."""
        return K * B / (self.N_c * self.T_c)


@dataclass(frozen=True)
class SystemConfig:
    B: int
    K: int
    M: int
    rho_r_db: float
    kappa: int = 1
    master_seed: int = DEFAULT_SEED
    coherence: CoherenceBudget | None = None

    def __post_init__(self):
        if self.B < 1:
            raise ConfigError("B must be >= 1", field="B")
        if self.K < 1:
            raise ConfigError("K must be >= 1", field="K")
        if self.M < 1:
            raise ConfigError("M must be >= 1", field="M")
        if self.kappa not in (0, 1) or isinstance(self.kappa, bool):
            raise ConfigError("kappa must be 0 or 1", field="kappa")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", field="seed")
        if self.coherence is not None:
            self.coherence.check_users(self.K)

    @classmethod
    def build(cls, *, B, M, K=None, alpha=None, rho_r_db, kappa=1,
              master_seed=DEFAULT_SEED, coherence=None) -> "SystemConfig":
        """Resolve K from ``alpha`` (K = round(alpha * M)) or check consistency."""
        if K is None and alpha is None:
            raise ConfigError("one of K or alpha is required", field="K")
        if alpha is not None:
            if alpha < 0:
                raise ConfigError("alpha must be >= 0", field="alpha")
            k_from_alpha = round(alpha * M)
            if K is not None and K != k_from_alpha:
                raise ConfigError(
                    f"alpha={alpha} and K={K} are inconsistent: round(alpha*M)={k_from_alpha}",
                    field="alpha",
                )
            K = k_from_alpha
        return cls(B=int(B), K=int(K), M=int(M), rho_r_db=float(rho_r_db), kappa=kappa,
                   master_seed=int(master_seed), coherence=coherence)

    @property
    def alpha(self) -> float:
        return self.K / self.M

    @property
    def rho_r(self) -> float:
        return 10.0 ** (self.rho_r_db / 10.0)

    def replace(self, **changes) -> "SystemConfig":
        fields = asdict(self)
        fields["coherence"] = self.coherence
        fields.update(changes)
        return SystemConfig(**fields)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["alpha"] = self.alpha
        return out
