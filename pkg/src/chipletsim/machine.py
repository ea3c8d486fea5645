"""Machine topology and model shape configuration.

A :class:`MachineConfig` describes a chiplet GPU: how many accelerator dies
(XCDs) it has, how many compute units each die carries, the per-die L2 and
shared last-level cache capacities, and the bandwidth/compute peaks used by
the analytic cost model.  A :class:`ModelConfig` describes the transformer
whose decode step is simulated.

Configs are plain frozen dataclasses.  Construction does not validate, so
tests can build deliberately broken configs; :func:`validate` and
:func:`validate_model` check every invariant and raise :class:`ConfigError`
naming the first violation.  The shipped presets are always validated.

L1 caches are not modeled: the hit rates this simulator reports are L2 rates,
and inserting an L1 filter would change the L2 request stream with no
calibration source for it.
"""

from __future__ import annotations

import json
from dataclasses import MISSING, dataclass, fields
from pathlib import Path

KIB = 1024
MIB = 1024 * 1024


class ConfigError(ValueError):
    """A machine or model config violates an invariant, or failed to parse."""


@dataclass(frozen=True)
class MachineConfig:
    """Chiplet GPU topology and rates.

    ``workers_per_xcd`` excludes CUs reserved for scheduling: with
    ``scheduler_mode="dedicated"`` one CU per XCD runs the task scheduler and
    ``workers_per_xcd == cus_per_xcd - 1``; with ``scheduler_mode="none"``
    every CU is a worker.
    """

    num_xcds: int
    cus_per_xcd: int
    workers_per_xcd: int
    l2_capacity_bytes: int
    l2_line_bytes: int
    llc_capacity_bytes: int
    hbm_bandwidth_bytes_per_s: float
    l2_bandwidth_bytes_per_s: float
    peak_flops: float
    scheduler_mode: str = "dedicated"

    @property
    def ridge_point(self) -> float:
        """Arithmetic intensity (FLOP/byte) where the roofline goes flat."""
        return self.peak_flops / self.hbm_bandwidth_bytes_per_s

    @property
    def total_cus(self) -> int:
        return self.num_xcds * self.cus_per_xcd

    @property
    def total_workers(self) -> int:
        return self.num_xcds * self.workers_per_xcd

    @property
    def total_l2_bytes(self) -> int:
        return self.num_xcds * self.l2_capacity_bytes


@dataclass(frozen=True)
class ModelConfig:
    """Transformer decode shapes: sizes only, no weights."""

    hidden_dim: int
    ffn_dim: int
    num_layers: int
    q_heads: int
    kv_heads: int
    dtype_bytes: int

    @property
    def head_dim(self) -> int:
        return self.hidden_dim // self.q_heads

    @property
    def qkv_dim(self) -> int:
        """Output width of the fused QKV projection: Q plus two KV blocks."""
        return (self.q_heads + 2 * self.kv_heads) * self.head_dim

    @property
    def gate_up_dim(self) -> int:
        return 2 * self.ffn_dim


def validate(config: MachineConfig) -> None:
    """Raise :class:`ConfigError` on the first violated machine invariant."""
    if config.num_xcds <= 0:
        raise ConfigError("nonpositive XCD count")
    if config.cus_per_xcd <= 0:
        raise ConfigError("nonpositive CU count per XCD")
    if config.l2_line_bytes <= 0:
        raise ConfigError("nonpositive line size")
    if config.l2_capacity_bytes <= 0:
        raise ConfigError("nonpositive L2 capacity")
    if config.llc_capacity_bytes <= 0:
        raise ConfigError("nonpositive LLC capacity")
    if config.l2_capacity_bytes % config.l2_line_bytes != 0:
        raise ConfigError("L2 capacity is not a multiple of the line size")
    if config.hbm_bandwidth_bytes_per_s <= 0:
        raise ConfigError("nonpositive HBM bandwidth")
    if config.l2_bandwidth_bytes_per_s <= 0:
        raise ConfigError("nonpositive L2 bandwidth")
    if config.peak_flops <= 0:
        raise ConfigError("nonpositive compute peak")
    if config.scheduler_mode not in ("dedicated", "none"):
        raise ConfigError(f"unknown scheduler mode {config.scheduler_mode!r}")
    expected_workers = (
        config.cus_per_xcd - 1
        if config.scheduler_mode == "dedicated"
        else config.cus_per_xcd
    )
    if config.workers_per_xcd != expected_workers:
        raise ConfigError(
            f"workers_per_xcd must be {expected_workers} for scheduler mode "
            f"{config.scheduler_mode!r}, got {config.workers_per_xcd}"
        )
    ridge = config.ridge_point
    if not (ridge > 0 and ridge != float("inf")):
        raise ConfigError("ridge point is not finite and positive")


def validate_model(model: ModelConfig) -> None:
    """Raise :class:`ConfigError` on the first violated model invariant."""
    for name in ("hidden_dim", "ffn_dim", "num_layers", "q_heads", "kv_heads",
                 "dtype_bytes"):
        if getattr(model, name) <= 0:
            raise ConfigError(f"nonpositive {name}")
    if model.hidden_dim % model.q_heads != 0:
        raise ConfigError("hidden_dim not divisible by q_heads")
    if model.q_heads % model.kv_heads != 0:
        raise ConfigError("q_heads not divisible by kv_heads")


_MACHINE_PRESETS = {
    # MI350-class part: 8 XCDs x 32 CUs, one scheduler CU per XCD, 4 MiB
    # private L2 per XCD, 256 MiB shared LLC, 5.3 TB/s HBM, 1.3 PF bf16 peak.
    # L2 aggregate bandwidth is ~100 TB/s across the package.
    "mi350": MachineConfig(
        num_xcds=8,
        cus_per_xcd=32,
        workers_per_xcd=31,
        l2_capacity_bytes=4 * MIB,
        l2_line_bytes=128,
        llc_capacity_bytes=256 * MIB,
        hbm_bandwidth_bytes_per_s=5.3e12,
        l2_bandwidth_bytes_per_s=1.0e14,
        peak_flops=1.3e15,
    ),
    # Desk-scale machine for tests: tiny caches so locality effects show up
    # with kilobyte-sized GEMMs.  Bandwidth/peak values are arbitrary but
    # keep the ridge point finite (100 FLOP/byte).
    "toy": MachineConfig(
        num_xcds=2,
        cus_per_xcd=4,
        workers_per_xcd=3,
        l2_capacity_bytes=64 * KIB,
        l2_line_bytes=128,
        llc_capacity_bytes=256 * KIB,
        hbm_bandwidth_bytes_per_s=1.0e11,
        l2_bandwidth_bytes_per_s=8.0e11,
        peak_flops=1.0e13,
    ),
}

_MODEL_PRESETS = {
    # Qwen3-8B dense: 4096 hidden, 12288 FFN, 36 layers, GQA 32 Q / 8 KV
    # heads, bf16.
    "qwen3-8b": ModelConfig(
        hidden_dim=4096,
        ffn_dim=12288,
        num_layers=36,
        q_heads=32,
        kv_heads=8,
        dtype_bytes=2,
    ),
    # Small model whose per-op widths divide 16-wide tiles on the toy machine.
    "toy": ModelConfig(
        hidden_dim=64,
        ffn_dim=128,
        num_layers=2,
        q_heads=4,
        kv_heads=2,
        dtype_bytes=2,
    ),
}


def preset(name: str) -> MachineConfig:
    """Return a validated machine preset (``mi350`` or ``toy``)."""
    try:
        config = _MACHINE_PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown machine preset {name!r}; "
            f"known: {sorted(_MACHINE_PRESETS)}"
        ) from None
    validate(config)
    return config


def model_preset(name: str) -> ModelConfig:
    """Return a validated model preset (``qwen3-8b`` or ``toy``)."""
    try:
        model = _MODEL_PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown model preset {name!r}; known: {sorted(_MODEL_PRESETS)}"
        ) from None
    validate_model(model)
    return model


def _from_json(path, cls, validator):
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown fields {unknown}")
    required = {
        f.name
        for f in fields(cls)
        if f.default is MISSING and f.default_factory is MISSING
    }
    missing = sorted(required - set(raw))
    if missing:
        raise ConfigError(f"{path}: missing fields {missing}")
    config = cls(**raw)
    validator(config)
    return config


def load_machine(path) -> MachineConfig:
    """Load a machine config from strict JSON (unknown fields rejected)."""
    return _from_json(path, MachineConfig, validate)


def load_model(path) -> ModelConfig:
    """Load a model config from strict JSON (unknown fields rejected)."""
    return _from_json(path, ModelConfig, validate_model)


def resolve_machine(spec: str) -> MachineConfig:
    """Interpret ``spec`` as a preset name, falling back to a JSON path."""
    if spec in _MACHINE_PRESETS:
        return preset(spec)
    return load_machine(spec)


def resolve_model(spec: str) -> ModelConfig:
    """Interpret ``spec`` as a preset name, falling back to a JSON path."""
    if spec in _MODEL_PRESETS:
        return model_preset(spec)
    return load_model(spec)
