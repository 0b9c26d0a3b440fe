"""Kedro settings of the project.

See https://docs.kedro.org/en/stable/kedro_project_setup/settings.html for the
available options.
"""

from kedro.config import OmegaConfigLoader

CONFIG_LOADER_CLASS = OmegaConfigLoader
# parameters_<pipeline>.yml files share a single parameters namespace
CONFIG_LOADER_ARGS = {
    "base_env": "base",
    "default_run_env": "local",
    "config_patterns": {
        "parameters": ["parameters*", "parameters*/**", "**/parameters*"],
    },
}
