"""Post-quantum backend over a liboqs shared library, bound via ctypes.

This is the preferred backend for the PQC families: liboqs ships
optimized (AVX2 and friends) implementations and covers Mayo and Cross,
which have no Python wheels. The binding knows the OQS_SIG struct
layout for the 0.12.x and 0.16.x ABIs; the layouts below must match
exactly, so other versions are refused rather than risking memory
corruption.

Two libraries may be loaded at once. The primary (0.12.x keeps the
round-3 Dilithium and SPHINCS+ parameter sets that newer releases
dropped) serves every family, but its CROSS implementation predates
version 2.x and accepts signatures whose unused padding bits were
tampered with. When a second, newer library is present its hardened
CROSS deserializer is preferred for the Cross family.

The primary library is located through, in order: the CHAINSIG_LIBOQS
environment variable, the system linker search, and a short list of
conventional install prefixes. The Cross-preferred library comes from
CHAINSIG_LIBOQS_CROSS or the /opt/liboqs-cross prefix.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import logging
import os
import sys
import weakref
from typing import TYPE_CHECKING, Iterator

from ..errors import BackendFailure, UnsupportedVariant
from .base import Provider, SchemeBackend

if TYPE_CHECKING:
    from .catalog import VariantDescriptor

logger = logging.getLogger(__name__)

_PQC_PREFIXES = (
    "ML-DSA-",
    "Dilithium",
    "Falcon-",
    "MAYO-",
    "SHA2-",
    "SHAKE-",
    "Cross-",
)


def _oqs_algorithm(variant: str) -> str:
    """Map a catalog variant string to the liboqs algorithm identifier."""
    if variant.startswith(("SHA2-", "SHAKE-")):
        return "SPHINCS+-" + variant
    if variant.startswith("Cross-"):
        return "cross" + variant[len("Cross"):]
    return variant


class _SigStructV12(ctypes.Structure):
    # mirror of OQS_SIG (liboqs 0.12.x)
    _fields_ = [
        ("method_name", ctypes.c_char_p),
        ("alg_version", ctypes.c_char_p),
        ("claimed_nist_level", ctypes.c_uint8),
        ("euf_cma", ctypes.c_bool),
        ("sig_with_ctx_support", ctypes.c_bool),
        ("length_public_key", ctypes.c_size_t),
        ("length_secret_key", ctypes.c_size_t),
        ("length_signature", ctypes.c_size_t),
        ("keypair", ctypes.c_void_p),
        ("sign", ctypes.c_void_p),
        ("sign_with_ctx_str", ctypes.c_void_p),
        ("verify", ctypes.c_void_p),
        ("verify_with_ctx_str", ctypes.c_void_p),
    ]


class _SigStructV16(ctypes.Structure):
    # mirror of OQS_SIG (liboqs 0.16.x); adds suf_cma after euf_cma
    _fields_ = [
        ("method_name", ctypes.c_char_p),
        ("alg_version", ctypes.c_char_p),
        ("claimed_nist_level", ctypes.c_uint8),
        ("euf_cma", ctypes.c_bool),
        ("suf_cma", ctypes.c_bool),
        ("sig_with_ctx_support", ctypes.c_bool),
        ("length_public_key", ctypes.c_size_t),
        ("length_secret_key", ctypes.c_size_t),
        ("length_signature", ctypes.c_size_t),
        ("keypair", ctypes.c_void_p),
        ("sign", ctypes.c_void_p),
        ("sign_with_ctx_str", ctypes.c_void_p),
        ("verify", ctypes.c_void_p),
        ("verify_with_ctx_str", ctypes.c_void_p),
    ]


_STRUCT_FOR_ABI = {
    "0.12.": _SigStructV12,
    "0.16.": _SigStructV16,
}

# CROSS implementations before 2.x (shipped with liboqs 0.13) skip the
# zero-padding checks during deserialization, so a signature stays
# valid after some single-byte tampers. Libraries from 0.12.x should
# not serve the Cross family when a newer one is on hand.
_MALLEABLE_CROSS_PREFIX = "0.12."


class OqsLoadError(Exception):
    """liboqs could not be located or has an incompatible ABI."""


_LIBDIRS = ("lib", "lib64", "lib/x86_64-linux-gnu", "lib/aarch64-linux-gnu")


def _lib_suffix() -> str:
    return ".dylib" if sys.platform == "darwin" else ".so"


def _candidate_paths() -> Iterator[str]:
    override = os.environ.get("CHAINSIG_LIBOQS")
    if override:
        yield override
        return
    found = ctypes.util.find_library("oqs")
    if found:
        yield found
    for prefix in ("/usr/local", "/opt/liboqs", "/opt/homebrew", "/usr"):
        for libdir in _LIBDIRS:
            yield f"{prefix}/{libdir}/liboqs{_lib_suffix()}"


def _cross_candidate_paths() -> Iterator[str]:
    override = os.environ.get("CHAINSIG_LIBOQS_CROSS")
    if override:
        yield override
        return
    for libdir in _LIBDIRS:
        yield f"/opt/liboqs-cross/{libdir}/liboqs{_lib_suffix()}"


class _Library:
    """A loaded liboqs with typed entry points."""

    def __init__(self, path: str) -> None:
        cdll = ctypes.CDLL(path)
        cdll.OQS_version.restype = ctypes.c_char_p
        cdll.OQS_version.argtypes = []
        version = cdll.OQS_version().decode()
        struct = next(
            (s for prefix, s in _STRUCT_FOR_ABI.items() if version.startswith(prefix)),
            None,
        )
        if struct is None:
            known = ", ".join(p + "x" for p in _STRUCT_FOR_ABI)
            raise OqsLoadError(
                f"{path} is liboqs {version}; this binding targets {known}"
            )
        cdll.OQS_init.restype = None
        cdll.OQS_init.argtypes = []
        cdll.OQS_SIG_alg_is_enabled.restype = ctypes.c_int
        cdll.OQS_SIG_alg_is_enabled.argtypes = [ctypes.c_char_p]
        cdll.OQS_SIG_new.restype = ctypes.POINTER(struct)
        cdll.OQS_SIG_new.argtypes = [ctypes.c_char_p]
        cdll.OQS_SIG_free.restype = None
        cdll.OQS_SIG_free.argtypes = [ctypes.POINTER(struct)]
        cdll.OQS_SIG_keypair.restype = ctypes.c_int
        cdll.OQS_SIG_keypair.argtypes = [
            ctypes.POINTER(struct),
            ctypes.c_char_p,
            ctypes.c_char_p,
        ]
        cdll.OQS_SIG_sign.restype = ctypes.c_int
        cdll.OQS_SIG_sign.argtypes = [
            ctypes.POINTER(struct),
            ctypes.c_char_p,
            ctypes.POINTER(ctypes.c_size_t),
            ctypes.c_char_p,
            ctypes.c_size_t,
            ctypes.c_char_p,
        ]
        cdll.OQS_SIG_verify.restype = ctypes.c_int
        cdll.OQS_SIG_verify.argtypes = [
            ctypes.POINTER(struct),
            ctypes.c_char_p,
            ctypes.c_size_t,
            ctypes.c_char_p,
            ctypes.c_size_t,
            ctypes.c_char_p,
        ]
        cdll.OQS_init()
        self.cdll = cdll
        self.path = path
        self.version = version

    def sig_enabled(self, algorithm: str) -> bool:
        return bool(self.cdll.OQS_SIG_alg_is_enabled(algorithm.encode()))


def _load_library(candidates: Iterator[str]) -> _Library:
    errors = []
    for path in candidates:
        try:
            lib = _Library(path)
        except OqsLoadError as exc:
            errors.append(str(exc))
            continue
        except OSError as exc:
            errors.append(f"{path}: {exc}")
            continue
        logger.debug("loaded liboqs %s from %s", lib.version, lib.path)
        return lib
    raise OqsLoadError("; ".join(errors) if errors else "no liboqs candidates found")


class OqsBackend(SchemeBackend):
    def __init__(self, lib: _Library, algorithm: str) -> None:
        sig = lib.cdll.OQS_SIG_new(algorithm.encode())
        if not sig:
            raise UnsupportedVariant(
                f"liboqs at {lib.path} does not enable {algorithm!r}"
            )
        self._lib = lib
        self._sig = sig
        self._algorithm = algorithm
        self.library_version = lib.version
        fields = sig.contents
        self._pk_len = fields.length_public_key
        self._sk_len = fields.length_secret_key
        self._sig_max = fields.length_signature
        self._finalizer = weakref.finalize(self, lib.cdll.OQS_SIG_free, sig)

    def keypair(self) -> tuple[bytes, bytes]:
        public = ctypes.create_string_buffer(self._pk_len)
        secret = ctypes.create_string_buffer(self._sk_len)
        if self._lib.cdll.OQS_SIG_keypair(self._sig, public, secret) != 0:
            raise BackendFailure(f"{self._algorithm}: keypair generation failed")
        return public.raw, secret.raw

    def sign(self, secret_key: bytes, message: bytes) -> bytes:
        if len(secret_key) != self._sk_len:
            raise BackendFailure(
                f"{self._algorithm}: secret key must be {self._sk_len} bytes,"
                f" got {len(secret_key)}"
            )
        buffer = ctypes.create_string_buffer(self._sig_max)
        out_len = ctypes.c_size_t(0)
        rc = self._lib.cdll.OQS_SIG_sign(
            self._sig, buffer, ctypes.byref(out_len), message, len(message), secret_key
        )
        if rc != 0:
            raise BackendFailure(f"{self._algorithm}: signing failed (rc={rc})")
        return buffer.raw[: out_len.value]

    def verify(self, public_key: bytes, message: bytes, signature: bytes) -> bool:
        if len(public_key) != self._pk_len:
            raise BackendFailure(
                f"{self._algorithm}: public key must be {self._pk_len} bytes,"
                f" got {len(public_key)}"
            )
        rc = self._lib.cdll.OQS_SIG_verify(
            self._sig, message, len(message), signature, len(signature), public_key
        )
        return rc == 0


class OqsProvider(Provider):
    name = "oqs"

    def __init__(self) -> None:
        self._lib: _Library | None = None
        self._error: str | None = None
        self._probed = False
        self._cross_lib: _Library | None = None
        self._cross_probed = False
        self._warned_malleable_cross = False

    def _load(self) -> _Library | None:
        if not self._probed:
            self._probed = True
            try:
                self._lib = _load_library(_candidate_paths())
            except OqsLoadError as exc:
                self._error = str(exc)
        return self._lib

    def _load_cross(self) -> _Library | None:
        """The library serving the Cross family, hardened when possible."""
        primary = self._load()
        if primary is not None and not primary.version.startswith(
            _MALLEABLE_CROSS_PREFIX
        ):
            return primary
        if not self._cross_probed:
            self._cross_probed = True
            try:
                self._cross_lib = _load_library(_cross_candidate_paths())
            except OqsLoadError as exc:
                logger.debug("no dedicated Cross library: %s", exc)
        if self._cross_lib is not None:
            return self._cross_lib
        if primary is not None and not self._warned_malleable_cross:
            self._warned_malleable_cross = True
            logger.warning(
                "serving Cross from liboqs %s, whose verifier ignores "
                "signature padding bits; tampered padding is not rejected",
                primary.version,
            )
        return primary

    def _library_for(self, variant: str) -> _Library | None:
        if variant.startswith("Cross-"):
            return self._load_cross()
        return self._load()

    def available(self) -> bool:
        return self._load() is not None

    def unavailable_reason(self) -> str:
        self._load()
        return f"liboqs not loadable: {self._error}"

    def supports(self, variant: str) -> bool:
        if not variant.startswith(_PQC_PREFIXES):
            return False
        lib = self._library_for(variant)
        if lib is None:
            return True
        return lib.sig_enabled(_oqs_algorithm(variant))

    def create(self, descriptor: "VariantDescriptor") -> SchemeBackend:
        if not descriptor.variant.startswith(_PQC_PREFIXES):
            raise UnsupportedVariant(
                f"oqs provider does not serve {descriptor.variant!r}"
            )
        lib = self._library_for(descriptor.variant)
        if lib is None:
            raise UnsupportedVariant(self.unavailable_reason())
        return OqsBackend(lib, _oqs_algorithm(descriptor.variant))
