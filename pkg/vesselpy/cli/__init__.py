# -*- coding: utf-8 -*-
"""VesselPy library.

Command line interface, run configuration files and the synthetic
fundus dataset generator.

This is licensed under an MIT license. See the README.rst file
for more information.
"""

from .synth import SynthSpec, VESSEL_FRACTION, synth_dataset
from .config import (CONFIG_ENV, CONFIG_FILE, RunSettings, RunConfig, parse_value,
                     format_value, apply_overrides, parse_config_text, load_config,
                     format_config, write_config)
from .main import build_parser, effective_config, run, main
