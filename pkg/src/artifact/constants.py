"""Physical constants (CODATA 2018) and model-wide defaults."""

import math

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K

DEFAULT_ETA_THR = 1e-4
DEFAULT_OMEGA0 = 2 * math.pi * 6e9  # rad / s
ROOM_TEMPERATURE = 300.0  # K

# Fault locations inside one level-1 logical cNOT; used as the per-level growth factor.
DEFAULT_D = 291
