"""Settings, proof profiles and application data storage using platformdirs."""
import copy
import json
import os
from pathlib import Path
from typing import List

from platformdirs import user_data_dir

FIXTURES_ENV = "GNPROVE_FIXTURES"

PIPELINES = ('tm-ncf', 'tm-stieltjes', 'pd-ncf')

# keys shared by every pipeline; the per-pipeline tables below override them
_COMMON = {
    'ladders': [[0, 3, 6, 9, 12]],
    'degrees': [[75] * 5],
    'retries': 2,
    'margin': 16,
    'min_init': 2,
    'max_init': 12,
    'source_level': 11,
    'max_level': 16,
    'product_order': 270,
    'sum_order': 330,
    'final_order': 96,
    'max_order': 4096,
    'final_ladder': [0, 1, 2, 3, 4],
    'final_degrees': [24] * 5,
    'residual_order': 200,
    'samples': 3,
    'max_states': 4096,
    'automaton_check': 1024,
    'max_length': 4096,
    'base_margin': 2,
    'relations': True,
}

BUILTIN_PROFILES = {
    'full': {
        'tm-ncf': {
            'ladders': [[0, 3, 6, 9, 12]],
            'degrees': [[75] * 5],
            'min_init': 8,
        },
        'tm-stieltjes': {
            'ladders': [[0, 3, 6, 9, 12]],
            'degrees': [[32] * 5],
            'source_level': 9,
            'product_order': 160,
            'sum_order': 200,
        },
        'pd-ncf': {
            'ladders': [[0, 1, 2, 4], [0, 3, 6, 9, 12]],
            'degrees': [[16] * 4, [48] * 5],
            'source_level': 11,
        },
    },
    'auto': {
        'tm-ncf': {
            'ladders': [[0, 1, 2, 4], [0, 3, 6, 9, 12]],
            'degrees': [[16] * 4, [24] * 5],
            'min_init': 8,
            'retries': 3,
        },
        'tm-stieltjes': {
            'ladders': [[0, 1, 2, 4], [0, 3, 6, 9, 12]],
            'degrees': [[8] * 4, [12] * 5],
            'source_level': 9,
            'retries': 3,
            'product_order': 160,
            'sum_order': 200,
        },
        'pd-ncf': {
            'ladders': [[0, 1, 2, 4], [0, 3, 6, 9, 12]],
            'degrees': [[8] * 4, [16] * 5],
            'retries': 3,
        },
    },
}


class Settings:
    """Manage user profiles and recent reports."""

    def __init__(self):
        """Initialize settings manager."""
        self.app_name = "gnprove"
        self.app_author = "gnprove"
        self.data_dir = Path(user_data_dir(self.app_name, self.app_author))
        self.settings_file = self.data_dir / "settings.json"
        self.max_recent_reports = 10

        # Ensure data directory exists
        self.data_dir.mkdir(parents=True, exist_ok=True)

        self._settings = self._load_settings()

    def _load_settings(self) -> dict:
        """Load settings from file."""
        if self.settings_file.exists():
            try:
                with open(self.settings_file, 'r') as f:
                    return json.load(f)
            except Exception as e:
                print(f"Warning: Could not load settings: {e}")
                return self._default_settings()
        return self._default_settings()

    def _default_settings(self) -> dict:
        """Return default settings."""
        return {
            "profiles": {},
            "recent_reports": [],
            "fixtures_dir": None,
        }

    def _save_settings(self) -> None:
        """Save settings to file."""
        try:
            with open(self.settings_file, 'w') as f:
                json.dump(self._settings, f, indent=2)
        except Exception as e:
            print(f"Warning: Could not save settings: {e}")

    def profile_names(self) -> List[str]:
        return sorted(set(BUILTIN_PROFILES) | set(self._settings.get("profiles", {})))

    def profile(self, name: str, pipeline: str) -> dict:
        """The merged profile: common keys, then the built-in table, then user overrides."""
        if pipeline not in PIPELINES:
            raise KeyError(f"unknown pipeline {pipeline!r}")
        user = self._settings.get("profiles", {}).get(name)
        if name not in BUILTIN_PROFILES and user is None:
            raise KeyError(f"unknown profile {name!r}")
        out = copy.deepcopy(_COMMON)
        out.update(copy.deepcopy(BUILTIN_PROFILES.get(name, BUILTIN_PROFILES['full'])[pipeline]))
        if user:
            out.update({k: v for k, v in user.items() if k not in PIPELINES})
            out.update(user.get(pipeline, {}))
        out['name'] = name
        out['pipeline'] = pipeline
        return out

    def set_profile(self, name: str, overrides: dict) -> None:
        """Store user overrides for a profile; pipeline names may key nested tables."""
        self._settings.setdefault("profiles", {})[name] = overrides
        self._save_settings()

    def get_recent_reports(self) -> List[str]:
        """Get list of recent report files."""
        recent = self._settings.get("recent_reports", [])
        existing = [f for f in recent if Path(f).exists()]

        if len(existing) != len(recent):
            self._settings["recent_reports"] = existing
            self._save_settings()

        return existing

    def add_recent_report(self, filepath: str) -> None:
        """Add a report to the recent reports list."""
        filepath = str(Path(filepath).resolve())
        recent = self._settings.get("recent_reports", [])

        if filepath in recent:
            recent.remove(filepath)
        recent.insert(0, filepath)

        self._settings["recent_reports"] = recent[:self.max_recent_reports]
        self._save_settings()

    def fixtures_dir(self, override: str = None) -> Path:
        """--fixtures, then $GNPROVE_FIXTURES, then the settings file, then the packaged data."""
        for candidate in (override, os.environ.get(FIXTURES_ENV), self._settings.get("fixtures_dir")):
            if candidate:
                return Path(candidate)
        return Path(__file__).parent / "data" / "fixtures"


# Global settings instance
_settings = None


def get_settings() -> Settings:
    """Get the global settings instance."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
