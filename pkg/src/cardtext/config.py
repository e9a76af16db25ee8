"""Pipeline configuration. Defaults are the published constants."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Dict

from .background import BackgroundParams
from .classifier import RuleParams


@dataclass(frozen=True)
class PipelineConfig:
    # background elimination
    t_fixed: int = 20
    t_min: int = 100
    width_divisor: int = 64
    block_height: int = 2
    spread_statistic: str = "range"
    # rule formulas: H_TH = H / h_th_div, A_TH = W * H / a_th_div, ...
    h_th_div: float = 60
    w_th_div: float = 40
    a_th_div: float = 1500
    b_th_div: float = 100
    l_th_div: float = 40
    r_min: float = 1.2
    r_max: float = 32.0
    ra_min: float = 5.0
    ra_max: float = 90.0
    # absolute replacements for derived thresholds, keyed by RuleThresholds field
    overrides: Dict[str, float] = field(default_factory=dict)
    connectivity: int = 8
    ra_region: str = "blocks"

    def __post_init__(self):
        if self.connectivity not in (4, 8):
            raise ValueError("connectivity must be 4 or 8")
        if self.ra_region not in ("blocks", "bbox"):
            raise ValueError("ra_region must be 'blocks' or 'bbox'")
        self.background_params()  # validates

    def background_params(self) -> BackgroundParams:
        return BackgroundParams(
            t_fixed=self.t_fixed,
            t_min=self.t_min,
            width_divisor=self.width_divisor,
            block_height=self.block_height,
            spread_statistic=self.spread_statistic,
        )

    def rule_params(self) -> RuleParams:
        return RuleParams(**{f.name: getattr(self, f.name) for f in fields(RuleParams)})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config key(s): {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
