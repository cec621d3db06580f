# src/cfos/core/environment.py

"""cfos Environment Management

Defaults for CLI flags can come from the process environment or a `.env`
file found in the working directory or one of its parents.
"""

import os
from typing import Dict, Optional
from pathlib import Path
from dotenv import dotenv_values, load_dotenv

class Environment:
    """cfos Environment Manager"""

    def __init__(self):
        self.env_file: Optional[Path] = None
        self.env_vars: Dict[str, str] = {}

    def load(self, env_file: Optional[str] = None) -> Dict[str, str]:
        """Load environment variables"""
        if env_file:
            self.env_file = Path(env_file)
        else:
            # Look in current and parent directories
            current = Path.cwd()
            while current != current.parent:
                env_path = current / ".env"
                if env_path.exists():
                    self.env_file = env_path
                    break
                current = current.parent

        if self.env_file and self.env_file.exists():
            load_dotenv(self.env_file, override=False)
            self.env_vars.update(
                {k: v for k, v in dotenv_values(self.env_file).items() if v is not None}
            )

        return self.env_vars

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        """Get environment variable, process environment first"""
        value = os.getenv(key)
        if value is not None:
            return value
        return self.env_vars.get(key, default)

    def get_int(self, key: str, default: int) -> int:
        """Get an integer setting"""
        value = self.get(key)
        if value is None or value.strip() == "":
            return default
        try:
            return int(value)
        except ValueError:
            raise ValueError(f"Environment variable {key} must be an integer, got {value!r}")

    def get_bool(self, key: str, default: bool = False) -> bool:
        """Get a boolean setting (1/true/yes/on)"""
        value = self.get(key)
        if value is None:
            return default
        return value.strip().lower() in {"1", "true", "yes", "on"}

# Global environment instance
_env = Environment()

def load_env(env_file: Optional[str] = None) -> Dict[str, str]:
    """Load environment variables"""
    return _env.load(env_file)

def get_env(key: str, default: Optional[str] = None) -> Optional[str]:
    """Get environment variable"""
    return _env.get(key, default)

def get_env_int(key: str, default: int) -> int:
    """Get integer environment variable"""
    return _env.get_int(key, default)

def get_env_bool(key: str, default: bool = False) -> bool:
    """Get boolean environment variable"""
    return _env.get_bool(key, default)
