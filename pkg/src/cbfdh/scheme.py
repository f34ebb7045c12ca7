"""Full-domain-hash signatures over syndrome decoding.

The secret key is a parity-check matrix ``h_sec`` drawn from a structured
family together with a random nonsingular scramble ``s`` and a column
permutation ``perm``; the public matrix is ``h_pub = s @ h_sec @ P``.  A
signature on message m is a pair (e, salt) with ``h_pub e^T = hash(m, salt)``
and ``|e| = w``: the signer hashes, unscrambles the syndrome with s^{-1},
decodes to weight w on ``h_sec``, and pushes the error through the
permutation.

The reference decoder is a randomized information-set search with weight
seeding, usable for any parity-check matrix at desk scale.  Its output law
on S_w is close to but not exactly uniform; :func:`measure_decoder_distance`
estimates that gap empirically for the reduction tooling.

Wire formats
------------
Key files start with magic ``CBFDH1``, then n, k, w, lambda0 as little-endian
32-bit words, then a newline, then matrices in the text format of
:meth:`cbfdh.f2.BitMatrix.to_text`.  The public file carries h_pub; the
secret file carries h_sec, s, s^{-1} and the permutation as a line of
0-based image indices.  Signature files are two lines: salt hex, then the
error row in hex.
"""

from __future__ import annotations

import math
import random
import struct
import warnings
from dataclasses import dataclass
from typing import Callable, Protocol

from .exponents import gv_bound
from .f2 import (
    BitMatrix,
    BitVector,
    Permutation,
    SingularSelectionError,
    front_permutation,
    inverse,
    mat_mul,
    mat_vec_mul,
    random_full_rank,
    random_nonsingular,
    random_permutation,
    rank,
    systematic_form,
)
from .hashing import FdhHash

__all__ = [
    "SchemeParams",
    "SecretKey",
    "PublicKey",
    "SignatureKeyPair",
    "Signature",
    "SigningFailure",
    "KeyGenerationFailure",
    "SyndromeDecoder",
    "random_code_family",
    "uuv_code_family",
    "keygen",
    "decode_to_weight",
    "sign",
    "verify",
    "measure_decoder_distance",
    "save_public_key",
    "load_public_key",
    "save_secret_key",
    "load_secret_key",
    "save_signature",
    "load_signature",
]

MAGIC = b"CBFDH1"

CodeFamily = Callable[[random.Random], BitMatrix]


class SyndromeDecoder(Protocol):
    """Behavior contract: produce e with ``h e^T = s`` and ``|e| = w``
    within ``budget`` attempts, or None when the budget runs out.

    Any returned vector must pass both checks; :func:`decode_to_weight`
    is the reference implementation.
    """

    def __call__(
        self,
        h: BitMatrix,
        s: BitVector,
        w: int,
        budget: int,
        rng: random.Random,
    ) -> BitVector | None: ...


class SigningFailure(Exception):
    """The decoder exhausted its budget for this (message, salt) pair."""


class KeyGenerationFailure(Exception):
    """The code family kept returning unusable matrices."""


@dataclass(frozen=True)
class SchemeParams:
    """Scheme parameters: length n, dimension k, signature weight w,
    security target lam, and salt width lam0 in bits."""

    n: int
    k: int
    w: int
    lam: int = 128
    lam0: int = 64

    def __post_init__(self) -> None:
        if not 0 < self.k < self.n:
            raise ValueError("need 0 < k < n")
        if not 0 <= self.w <= self.n:
            raise ValueError("weight outside [0, n]")
        if self.lam0 <= 0 or self.lam <= 0:
            raise ValueError("security and salt widths must be positive")
        gv = gv_bound(self.n, self.k)
        if self.w < gv:
            warnings.warn(
                f"weight {self.w} below the GV distance {gv:.1f}: "
                "most syndromes have no preimage and signing will fail often",
                stacklevel=2,
            )
        if self.w >= (self.n - self.k) / 2:
            warnings.warn(
                f"weight {self.w} is at least (n-k)/2 = {(self.n - self.k) / 2}: "
                "decoding is easy and the scheme gives no security margin",
                stacklevel=2,
            )

    @property
    def n_k(self) -> int:
        return self.n - self.k

    @classmethod
    def with_salt_for(
        cls, n: int, k: int, w: int, lam: int, q_sign: float
    ) -> "SchemeParams":
        """Derive the salt width lam + 2*log2(q_sign) from a signing budget."""
        lam0 = math.ceil(lam + 2 * math.log2(q_sign))
        return cls(n=n, k=k, w=w, lam=lam, lam0=lam0)


@dataclass(frozen=True)
class SecretKey:
    h_sec: BitMatrix
    scramble: BitMatrix
    scramble_inv: BitMatrix
    perm: Permutation


@dataclass(frozen=True)
class PublicKey:
    h_pub: BitMatrix
    w: int


@dataclass(frozen=True)
class SignatureKeyPair:
    params: SchemeParams
    secret: SecretKey
    public: PublicKey


@dataclass(frozen=True)
class Signature:
    e: BitVector
    salt: BitVector


def random_code_family(n: int, k: int) -> CodeFamily:
    """Unstructured family: uniform full-rank (n-k) x n matrices."""

    def family(rng: random.Random) -> BitMatrix:
        return random_full_rank(n - k, n, rng)

    return family


def uuv_code_family(n: int, k_u: int, k_v: int) -> CodeFamily:
    """Family of (u, u+v) block parity checks on random component codes."""
    if n % 2:
        raise ValueError("length must be even")
    half = n // 2
    if not (0 < k_u < half and 0 < k_v < half):
        raise ValueError("component dimensions must lie in (0, n/2)")

    def family(rng: random.Random) -> BitMatrix:
        from .codes import uuv_parity_check

        h_u = random_full_rank(half - k_u, half, rng)
        h_v = random_full_rank(half - k_v, half, rng)
        return uuv_parity_check(h_u, h_v).matrix

    return family


def keygen(
    params: SchemeParams,
    family: CodeFamily,
    rng: random.Random,
    max_family_tries: int = 32,
) -> SignatureKeyPair:
    """Draw (h_sec, s, perm) and publish h_pub = s @ h_sec @ P."""
    r = params.n_k
    h_sec = None
    for _ in range(max_family_tries):
        candidate = family(rng)
        if candidate.nrows != r or candidate.ncols != params.n:
            raise ValueError("family produced a matrix of the wrong shape")
        if rank(candidate) == r:
            h_sec = candidate
            break
    if h_sec is None:
        raise KeyGenerationFailure(
            f"no full-rank matrix from the family in {max_family_tries} tries"
        )
    scramble = random_nonsingular(r, rng)
    perm = random_permutation(params.n, rng)
    h_pub = mat_mul(scramble, h_sec).permute_cols(perm)
    secret = SecretKey(h_sec, scramble, inverse(scramble), perm)
    return SignatureKeyPair(params, secret, PublicKey(h_pub, params.w))


def decode_to_weight(
    h: BitMatrix,
    s: BitVector,
    w: int,
    budget: int = 1000,
    rng: random.Random | None = None,
) -> BitVector | None:
    """Find e with ``h e^T = s`` and ``|e| = w``, or None when the budget
    runs out.  A None return means "gave up", never "no solution exists".

    Each trial picks a random information set, reduces, and sweeps the
    window weight p: p random support bits are seeded on the window and the
    trial accepts when the forced part has weight w - p.
    """
    if rng is None:
        rng = random.Random()
    r, n = h.nrows, h.ncols
    if s.n != r:
        raise ValueError("syndrome length mismatch")
    window = n - r
    for _ in range(budget):
        cols = sorted(rng.sample(range(n), r))
        try:
            u, hp, _ = systematic_form(h, cols, 0)
        except SingularSelectionError:
            continue
        perm_inv = front_permutation(cols, n).inverse()
        base = mat_vec_mul(u, s)
        for p in range(0, min(w, window) + 1):
            if w - p > r:
                continue
            seed = BitVector.from_support(window, rng.sample(range(window), p))
            forced = base ^ mat_vec_mul(hp, seed)
            if forced.weight() == w - p:
                return perm_inv.apply(forced.concat(seed))
    return None


def sign(
    keypair: SignatureKeyPair,
    message: bytes,
    hash_fn: FdhHash | Callable[[bytes, BitVector], BitVector],
    rng: random.Random,
    decoder_budget: int = 1000,
    resalt_on_failure: int = 0,
) -> Signature:
    """Sign: draw a fresh salt, hash, unscramble, decode, permute.

    Decoder failure raises :class:`SigningFailure`; when
    ``resalt_on_failure`` is positive, that many additional salts are tried
    first (off by default so failures stay visible).
    """
    params, secret = keypair.params, keypair.secret
    for _ in range(1 + max(0, resalt_on_failure)):
        salt = BitVector.random(params.lam0, rng)
        target = hash_fn(message, salt)
        if target.n != params.n_k:
            raise ValueError("hash output width does not match n - k")
        unscrambled = mat_vec_mul(secret.scramble_inv, target)
        e_sec = decode_to_weight(
            secret.h_sec, unscrambled, params.w, decoder_budget, rng
        )
        if e_sec is not None:
            return Signature(secret.perm.apply(e_sec), salt)
    raise SigningFailure(
        f"decoder exhausted {decoder_budget} information sets per salt"
    )


def verify(
    public: PublicKey,
    message: bytes,
    sig: Signature,
    hash_fn: FdhHash | Callable[[bytes, BitVector], BitVector],
) -> bool:
    """Total verification: weight check and syndrome match, False on any
    malformed input."""
    if sig.e.n != public.h_pub.ncols:
        return False
    if sig.e.weight() != public.w:
        return False
    target = hash_fn(message, sig.salt)
    if target.n != public.h_pub.nrows:
        return False
    return mat_vec_mul(public.h_pub, sig.e) == target


def measure_decoder_distance(
    h: BitMatrix,
    w: int,
    samples: int,
    rng: random.Random,
    decoder_budget: int = 300,
) -> tuple[float, float]:
    """Plug-in estimate of the total-variation gap between the decoder's
    output law on uniform syndromes and uniform on S_w.

    Returns (rho_hat, failure_rate).  The estimate includes the usual
    plug-in upward bias of order sqrt(|S_w| / samples); it is meant as a
    reported diagnostic, not a certified bound.
    """
    n = h.ncols
    size = math.comb(n, w)
    if size > 1 << 16:
        raise ValueError("S_w too large to tally at desk scale")
    counts: dict[int, int] = {}
    failures = 0
    for _ in range(samples):
        s = BitVector.random(h.nrows, rng)
        e = decode_to_weight(h, s, w, decoder_budget, rng)
        if e is None:
            failures += 1
        else:
            counts[e.bits] = counts.get(e.bits, 0) + 1
    got = sum(counts.values())
    if got == 0:
        return 1.0, 1.0
    uniform = 1.0 / size
    mass_seen = sum(abs(c / got - uniform) for c in counts.values())
    mass_missing = (size - len(counts)) * uniform
    return (mass_seen + mass_missing) / 2, failures / samples


# --- wire formats -----------------------------------------------------------


def _header(params: SchemeParams) -> bytes:
    return MAGIC + struct.pack("<4I", params.n, params.k, params.w, params.lam0) + b"\n"


def _parse_header(data: bytes) -> tuple[SchemeParams, bytes]:
    if data[: len(MAGIC)] != MAGIC:
        raise ValueError("bad magic: not a key file")
    fixed = len(MAGIC) + 16
    if len(data) < fixed + 1 or data[fixed : fixed + 1] != b"\n":
        raise ValueError("truncated key header")
    n, k, w, lam0 = struct.unpack("<4I", data[len(MAGIC) : fixed])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = SchemeParams(n=n, k=k, w=w, lam0=lam0)
    return params, data[fixed + 1 :]


def _split_matrix_blocks(text: str, count: int) -> list[str]:
    lines = text.splitlines()
    blocks: list[str] = []
    pos = 0
    for _ in range(count):
        if pos >= len(lines):
            raise ValueError("truncated key body")
        nrows = int(lines[pos].split()[0])
        blocks.append("\n".join(lines[pos : pos + 1 + nrows]))
        pos += 1 + nrows
    blocks.append("\n".join(lines[pos:]))
    return blocks


def save_public_key(path: str, params: SchemeParams, public: PublicKey) -> None:
    with open(path, "wb") as fh:
        fh.write(_header(params))
        fh.write(public.h_pub.to_text().encode())


def load_public_key(path: str) -> tuple[SchemeParams, PublicKey]:
    with open(path, "rb") as fh:
        params, body = _parse_header(fh.read())
    h_pub = BitMatrix.from_text(body.decode())
    if h_pub.nrows != params.n_k or h_pub.ncols != params.n:
        raise ValueError("public matrix shape disagrees with the header")
    return params, PublicKey(h_pub, params.w)


def save_secret_key(path: str, params: SchemeParams, secret: SecretKey) -> None:
    with open(path, "wb") as fh:
        fh.write(_header(params))
        fh.write(secret.h_sec.to_text().encode())
        fh.write(secret.scramble.to_text().encode())
        fh.write(secret.scramble_inv.to_text().encode())
        fh.write((" ".join(str(i) for i in secret.perm.images) + "\n").encode())


def load_secret_key(path: str) -> tuple[SchemeParams, SecretKey]:
    with open(path, "rb") as fh:
        params, body = _parse_header(fh.read())
    h_block, s_block, si_block, tail = _split_matrix_blocks(body.decode(), 3)
    h_sec = BitMatrix.from_text(h_block)
    scramble = BitMatrix.from_text(s_block)
    scramble_inv = BitMatrix.from_text(si_block)
    perm = Permutation(tuple(int(tok) for tok in tail.split()))
    if h_sec.nrows != params.n_k or h_sec.ncols != params.n:
        raise ValueError("secret matrix shape disagrees with the header")
    if mat_mul(scramble, scramble_inv) != BitMatrix.identity(params.n_k):
        raise ValueError("stored scramble inverse is inconsistent")
    if perm.n != params.n:
        raise ValueError("permutation length disagrees with the header")
    return params, SecretKey(h_sec, scramble, scramble_inv, perm)


def save_signature(path: str, sig: Signature) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(sig.salt.to_hex() + "\n")
        fh.write(sig.e.to_hex() + "\n")


def load_signature(path: str, params: SchemeParams) -> Signature:
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError("signature file must hold salt and error lines")
    salt_bytes = bytes.fromhex(lines[0])
    e_bytes = bytes.fromhex(lines[1])
    if len(salt_bytes) != (params.lam0 + 7) // 8 or len(e_bytes) != (params.n + 7) // 8:
        raise ValueError("signature field lengths disagree with the parameters")
    return Signature(
        BitVector.from_bytes(e_bytes, params.n),
        BitVector.from_bytes(salt_bytes, params.lam0),
    )
