"""
Configuration Manager

Handles loading and management of configuration settings for the set tools:
harness sizes, the rank bound of the formula evaluator, the construction path,
the bisimulation algorithm and output options.
"""

import copy
import json
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from cerberus import Validator

from src.utils.logger import setup_logger

CONFIG_SCHEMA = {
    'harness': {
        'type': 'dict',
        'schema': {
            'seed': {'type': 'integer', 'min': 0},
            'rank': {'type': 'integer', 'min': 0, 'max': 5},
            'samples': {'type': 'integer', 'min': 0},
            'dag_count': {'type': 'integer', 'min': 0},
            'dag_max_nodes': {'type': 'integer', 'min': 1},
        },
    },
    'logic': {
        'type': 'dict',
        'schema': {
            'max_rank': {'type': 'integer', 'min': 0, 'max': 5},
        },
    },
    'construction': {
        'type': 'dict',
        'schema': {
            'method': {'type': 'string', 'allowed': ['both', 'surgery', 'direct']},
        },
    },
    'bisim': {
        'type': 'dict',
        'schema': {
            'algorithm': {'type': 'string', 'allowed': ['refine', 'naive']},
        },
    },
    'unfold': {
        'type': 'dict',
        'schema': {
            'max_nodes': {'type': 'integer', 'min': 1},
        },
    },
    'output': {
        'type': 'dict',
        'schema': {
            'encoding': {'type': 'string'},
            'report_format': {'type': 'string', 'allowed': ['text', 'csv', 'json']},
        },
    },
    'advanced': {
        'type': 'dict',
        'schema': {
            'verbose_logging': {'type': 'boolean'},
            'parallel_processing': {'type': 'boolean'},
            'max_workers': {'type': 'integer', 'min': 1},
        },
    },
}


class ConfigManager:
    """Manages configuration settings"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager

        Args:
            config_path: Optional path to config file
        """
        self.logger = setup_logger(__name__)
        self.config_data: Dict[str, Any] = {}

        self.default_config = {
            'harness': {
                'seed': 0,
                'rank': 4,
                'samples': 500,
                'dag_count': 1000,
                'dag_max_nodes': 50,
            },
            'logic': {
                'max_rank': 5,
            },
            'construction': {
                'method': 'both',
            },
            'bisim': {
                'algorithm': 'refine',
            },
            'unfold': {
                'max_nodes': 200000,
            },
            'output': {
                'encoding': 'utf-8',
                'report_format': 'text',
            },
            'advanced': {
                'verbose_logging': False,
                'parallel_processing': False,
                'max_workers': 4,
            },
        }

        if config_path:
            self.load_config(config_path)
        else:
            self.load_default_config()

    def load_config(self, config_path: str) -> bool:
        """
        Load configuration from a JSON or YAML file

        Args:
            config_path: Path to configuration file

        Returns:
            Success status
        """
        try:
            config_path = Path(config_path)

            if not config_path.exists():
                self.logger.warning(f"Config file not found: {config_path}")
                self.load_default_config()
                return False

            suffix = config_path.suffix.lower()

            with open(config_path, 'r', encoding='utf-8') as f:
                if suffix == '.json':
                    config_data = json.load(f)
                elif suffix in ['.yaml', '.yml']:
                    config_data = yaml.safe_load(f) or {}
                else:
                    self.logger.error(f"Unsupported config format: {suffix}")
                    self.load_default_config()
                    return False

            self.config_data = self._merge_config(self.default_config, config_data)

            self.logger.info(f"Configuration loaded from: {config_path}")
            return True

        except Exception as e:
            self.logger.error(f"Failed to load config: {str(e)}")
            self.load_default_config()
            return False

    def load_default_config(self):
        """Load default configuration"""
        self.config_data = copy.deepcopy(self.default_config)
        self.logger.debug("Using default configuration")

    def save_config(self, config_path: str, config_data: Optional[Dict] = None) -> bool:
        """
        Save configuration to file; the format follows the suffix, JSON otherwise

        Returns:
            Success status
        """
        try:
            config_path = Path(config_path)
            config_data = config_data or self.config_data

            config_path.parent.mkdir(parents=True, exist_ok=True)

            suffix = config_path.suffix.lower()

            with open(config_path, 'w', encoding='utf-8') as f:
                if suffix in ['.yaml', '.yml']:
                    yaml.dump(config_data, f, default_flow_style=False,
                              allow_unicode=True, indent=2)
                else:
                    json.dump(config_data, f, indent=2, ensure_ascii=False)

            self.logger.info(f"Configuration saved to: {config_path}")
            return True

        except Exception as e:
            self.logger.error(f"Failed to save config: {str(e)}")
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value

        Args:
            key: Configuration key (supports dot notation)
            default: Default value if key not found
        """
        value = self.config_data
        for k in key.split('.'):
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default
        return value

    def set(self, key: str, value: Any) -> bool:
        """
        Set configuration value

        Args:
            key: Configuration key (supports dot notation)
            value: Value to set

        Returns:
            Success status
        """
        try:
            keys = key.split('.')
            config = self.config_data

            for k in keys[:-1]:
                if k not in config:
                    config[k] = {}
                config = config[k]

            config[keys[-1]] = value
            return True

        except Exception as e:
            self.logger.error(f"Failed to set config value {key}: {str(e)}")
            return False

    def _merge_config(self, default: Dict, user: Dict) -> Dict:
        """Deep-merge user settings over the defaults"""
        merged = copy.deepcopy(default)
        for key, value in user.items():
            if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                merged[key] = self._merge_config(merged[key], value)
            else:
                merged[key] = value
        return merged

    def get_harness_config(self) -> Dict[str, Any]:
        """Keyword arguments for run_harness"""
        return {
            'seed': self.get('harness.seed', 0),
            'rank': self.get('harness.rank', 4),
            'samples': self.get('harness.samples', 500),
            'dag_count': self.get('harness.dag_count', 1000),
            'dag_max_nodes': self.get('harness.dag_max_nodes', 50),
            'max_rank': self.get('logic.max_rank', 5),
            'parallel': self.get('advanced.parallel_processing', False),
            'max_workers': self.get('advanced.max_workers', 4),
        }

    def get_output_config(self) -> Dict[str, Any]:
        return {
            'encoding': self.get('output.encoding', 'utf-8'),
            'report_format': self.get('output.report_format', 'text'),
        }

    def update_settings(self, settings: Dict[str, Any]) -> bool:
        """
        Update several dotted settings at once; None values are skipped so
        unset command-line flags leave the configuration alone

        Returns:
            Success status
        """
        ok = True
        for key, value in settings.items():
            if value is not None:
                ok = self.set(key, value) and ok
        return ok

    def reset_to_defaults(self) -> bool:
        """Reset configuration to defaults"""
        self.config_data = copy.deepcopy(self.default_config)
        self.logger.info("Configuration reset to defaults")
        return True

    def validate_config(self) -> Dict[str, Any]:
        """
        Validate the current configuration against the schema

        Returns:
            {'valid': bool, 'errors': [...], 'warnings': [...]}
        """
        validator = Validator(CONFIG_SCHEMA, allow_unknown=True)
        errors = []
        warnings = []

        if not validator.validate(self.config_data):
            for section, problems in sorted(validator.errors.items()):
                errors.append(f"{section}: {problems}")

        try:
            'test'.encode(self.get('output.encoding', 'utf-8'))
        except (LookupError, TypeError):
            errors.append(f"Invalid encoding: {self.get('output.encoding')}")

        if self.get('harness.rank', 0) > self.get('logic.max_rank', 5):
            warnings.append("harness.rank exceeds logic.max_rank; the universe is cut at max_rank")

        unknown = sorted(set(self.config_data) - set(CONFIG_SCHEMA))
        if unknown:
            warnings.append(f"Unknown sections ignored: {unknown}")

        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'warnings': warnings,
        }

    def get_all_settings(self) -> Dict[str, Any]:
        return copy.deepcopy(self.config_data)
