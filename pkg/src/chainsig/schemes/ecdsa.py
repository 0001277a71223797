"""ECDSA backend over the `cryptography` package (OpenSSL)."""

from __future__ import annotations

from typing import TYPE_CHECKING

from ..errors import BackendFailure, UnsupportedVariant
from .base import Provider, SchemeBackend

if TYPE_CHECKING:
    from .catalog import VariantDescriptor

try:
    from cryptography.exceptions import InvalidSignature
    from cryptography.hazmat.primitives import hashes, serialization
    from cryptography.hazmat.primitives.asymmetric import ec

    _IMPORT_ERROR: Exception | None = None
except ImportError as exc:  # pragma: no cover - cryptography is a hard dep
    _IMPORT_ERROR = exc

# curve and digest pairings follow the usual strength matching
_CURVES = {
    "P-256": ("SECP256R1", "SHA256"),
    "P-384": ("SECP384R1", "SHA384"),
    "P-521": ("SECP521R1", "SHA512"),
}

# keys cross the SchemeBackend boundary as DER bytes; parsing them back
# on every call would dominate the timings, so recently seen keys keep
# their deserialized form here
_CACHE_MAX = 8


class EcdsaBackend(SchemeBackend):
    def __init__(self, curve_name: str, hash_name: str) -> None:
        self._curve = getattr(ec, curve_name)()
        self._algo = ec.ECDSA(getattr(hashes, hash_name)())
        self._private_cache: dict[bytes, ec.EllipticCurvePrivateKey] = {}
        self._public_cache: dict[bytes, ec.EllipticCurvePublicKey] = {}

    def keypair(self) -> tuple[bytes, bytes]:
        key = ec.generate_private_key(self._curve)
        secret = key.private_bytes(
            serialization.Encoding.DER,
            serialization.PrivateFormat.PKCS8,
            serialization.NoEncryption(),
        )
        public = key.public_key().public_bytes(
            serialization.Encoding.DER,
            serialization.PublicFormat.SubjectPublicKeyInfo,
        )
        return public, secret

    def _load_private(self, secret_key: bytes) -> "ec.EllipticCurvePrivateKey":
        key = self._private_cache.get(secret_key)
        if key is None:
            try:
                key = serialization.load_der_private_key(secret_key, password=None)
            except Exception as exc:
                raise BackendFailure(f"malformed ECDSA secret key: {exc}") from exc
            if len(self._private_cache) >= _CACHE_MAX:
                self._private_cache.clear()
            self._private_cache[secret_key] = key
        return key

    def _load_public(self, public_key: bytes) -> "ec.EllipticCurvePublicKey":
        key = self._public_cache.get(public_key)
        if key is None:
            try:
                key = serialization.load_der_public_key(public_key)
            except Exception as exc:
                raise BackendFailure(f"malformed ECDSA public key: {exc}") from exc
            if len(self._public_cache) >= _CACHE_MAX:
                self._public_cache.clear()
            self._public_cache[public_key] = key
        return key

    def sign(self, secret_key: bytes, message: bytes) -> bytes:
        return self._load_private(secret_key).sign(message, self._algo)

    def verify(self, public_key: bytes, message: bytes, signature: bytes) -> bool:
        key = self._load_public(public_key)
        try:
            key.verify(signature, message, self._algo)
            return True
        except InvalidSignature:
            return False


class EcdsaProvider(Provider):
    name = "ecdsa"

    def available(self) -> bool:
        return _IMPORT_ERROR is None

    def unavailable_reason(self) -> str:
        return f"cryptography not importable: {_IMPORT_ERROR}"

    def supports(self, variant: str) -> bool:
        return variant in _CURVES

    def create(self, descriptor: "VariantDescriptor") -> SchemeBackend:
        if not self.available():
            raise UnsupportedVariant(self.unavailable_reason())
        pairing = _CURVES.get(descriptor.variant)
        if pairing is None:
            raise UnsupportedVariant(
                f"ecdsa provider has no curve for {descriptor.variant!r}"
            )
        return EcdsaBackend(*pairing)
