"""Secure communication over 1-2-1 (beamformed mmWave) networks.

Capacity bounds, MDS-key routing schemes, and exact secrecy verification
against K-edge eavesdroppers.
"""

__version__ = "0.1.0"
