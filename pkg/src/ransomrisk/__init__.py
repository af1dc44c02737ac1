"""Ransomware risk prioritization pipeline.

Ingests victim disclosure records, houses adversary SKRAM profiles extracted
from threat reports, tracks per-group attack activity with an exponentially
weighted moving average, augments the data with synthetic victim and safe
samples, and trains a random-forest classifier that scores
(organization, ransomware group) pairs on a 0-9 risk scale.
"""

__version__ = "0.1.0"
