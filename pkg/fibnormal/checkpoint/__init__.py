"""
Resumable checkpoints for fibnormal streaming runs
"""

from fibnormal.checkpoint.checkpoint_manager import (
    CheckpointPolicy,
    checkpoint_load,
    checkpoint_save,
    load_compatible,
)

__all__ = ["CheckpointPolicy", "checkpoint_load", "checkpoint_save", "load_compatible"]
