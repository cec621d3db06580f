# src/cfos/oversampling/base.py

# ==================== Imports ====================
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..data.dataset import Dataset

# ==================== Errors ====================
class OversamplingError(ValueError):
    """Raised when an oversampler cannot run on the given data"""

# ==================== Base Oversampler ====================
class BaseOversampler(ABC):
    """Handle the evaluation harness and the CLI use to run one method.

    `resample` returns the augmented dataset (factual rows first, unchanged)
    and a JSON-ready report.
    """
    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description

    @abstractmethod
    def resample(self, d: Dataset, seed: Optional[int] = None) -> Tuple[Dataset, Dict[str, Any]]:
        """Augment a dataset; `seed` overrides the configured seed"""
        pass

    def __str__(self) -> str:
        return f"{self.name}: {self.description}"

class IdentityOversampler(BaseOversampler):
    """No oversampling; the reference row of every comparison"""
    def __init__(self):
        super().__init__(name="none", description="no oversampling")

    def resample(self, d: Dataset, seed: Optional[int] = None) -> Tuple[Dataset, Dict[str, Any]]:
        return d, {"method": self.name, "added": 0}

# ==================== Oversampler Registry ====================
class OversamplerRegistry:
    """Registry mapping method names and aliases to oversampler handles"""
    def __init__(self):
        self._methods: Dict[str, BaseOversampler] = {}
        self._aliases: Dict[str, str] = {}

    def register(self, method: BaseOversampler, aliases: Tuple[str, ...] = ()) -> None:
        """Register a handle under its name and optional aliases"""
        self._methods[method.name] = method
        for alias in aliases:
            self._aliases[alias] = method.name

    def unregister(self, name: str) -> None:
        """Unregister a handle and its aliases"""
        if name in self._methods:
            del self._methods[name]
        self._aliases = {a: n for a, n in self._aliases.items() if n != name}

    def get(self, name: str) -> Optional[BaseOversampler]:
        """Look up by name or alias"""
        key = name.strip().lower()
        return self._methods.get(self._aliases.get(key, key))

    def resolve(self, name: str) -> BaseOversampler:
        """Like get, but unknown names are an error"""
        method = self.get(name)
        if method is None:
            raise OversamplingError(
                f"unknown oversampling method {name!r}, expected one of {self.names()}"
            )
        return method

    def list_methods(self) -> List[str]:
        """Registered canonical names"""
        return list(self._methods.keys())

    def names(self) -> List[str]:
        """Canonical names and aliases, sorted"""
        return sorted(set(self._methods) | set(self._aliases))

# ==================== Helpers ====================
def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for (seed, key...); independent of scheduling"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))

def derive_seed(seed: int, *key: int) -> int:
    """Integer seed for a derived sub-run"""
    state = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])
