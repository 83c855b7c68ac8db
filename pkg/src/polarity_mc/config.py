"""Size caps and their environment override.

POLARITY_MC_CAPS accepts comma-separated assignments, e.g.
``lattice=32,filters=10,power=1024``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional

from .lattice import FILTER_CAP, LATTICE_CAP
from .simrel import POWER_CAP

ENV_VAR = "POLARITY_MC_CAPS"


@dataclass(frozen=True)
class Caps:
    lattice: int = LATTICE_CAP
    filters: int = FILTER_CAP
    power: int = POWER_CAP

    @staticmethod
    def from_env(environ: Optional[Mapping[str, str]] = None) -> "Caps":
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_VAR, "").strip()
        if not raw:
            return Caps()
        values = {}
        for part in raw.split(","):
            key, _, num = part.partition("=")
            key = key.strip()
            if key not in ("lattice", "filters", "power"):
                raise ValueError(f"{ENV_VAR}: unknown cap {key!r}")
            try:
                value = int(num)
            except ValueError:
                raise ValueError(f"{ENV_VAR}: bad value for {key!r}: {num!r}") from None
            if value <= 0:
                raise ValueError(f"{ENV_VAR}: cap {key!r} must be positive")
            values[key] = value
        return Caps(**values)
