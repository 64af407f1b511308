"""Marvin-256: a 256-bit extended-LS-design block cipher and its audit tools."""

from .cipher import (
    DEFAULT_ROUNDS,
    CipherParams,
    decrypt_block,
    decrypt_block_bitsliced,
    default_params,
    encrypt_block,
    encrypt_block_bitsliced,
)
from .state import State256

__all__ = [
    "DEFAULT_ROUNDS",
    "CipherParams",
    "State256",
    "decrypt_block",
    "decrypt_block_bitsliced",
    "default_params",
    "encrypt_block",
    "encrypt_block_bitsliced",
]
