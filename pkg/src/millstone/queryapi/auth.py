"""Bearer-token authentication: HMAC-SHA256 signed tokens (JWT HS256 format)."""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import time
from dataclasses import dataclass

from ..errors import BadSignature, Expired, MissingToken


@dataclass(frozen=True)
class Principal:
    subject: str
    expires_at: int
    scopes: tuple[str, ...] = ()


def _b64url(data: bytes) -> str:
    return base64.urlsafe_b64encode(data).rstrip(b"=").decode("ascii")


def _b64url_decode(text: str) -> bytes:
    pad = "=" * (-len(text) % 4)
    return base64.urlsafe_b64decode(text + pad)


def _sign(signing_input: bytes, key: str) -> bytes:
    return hmac.new(key.encode("utf-8"), signing_input, hashlib.sha256).digest()


def mint_token(subject: str, ttl_s: int, key: str, scopes=()) -> str:
    header = {"alg": "HS256", "typ": "JWT"}
    payload = {"sub": subject, "exp": int(time.time()) + ttl_s, "scopes": list(scopes)}
    signing_input = (
        _b64url(json.dumps(header, separators=(",", ":")).encode())
        + "."
        + _b64url(json.dumps(payload, separators=(",", ":")).encode())
    ).encode("ascii")
    return signing_input.decode("ascii") + "." + _b64url(_sign(signing_input, key))


def authenticate(authorization_header: str | None, key: str) -> Principal:
    """Verify `Authorization: Bearer <token>`; raises the 401 family on failure."""
    if not authorization_header:
        raise MissingToken("missing Authorization header")
    scheme, _, token = authorization_header.partition(" ")
    if scheme != "Bearer" or not token.strip():
        raise MissingToken("Authorization header is not a Bearer token")
    parts = token.strip().split(".")
    if len(parts) != 3:
        raise BadSignature("token is not header.payload.signature")
    signing_input = (parts[0] + "." + parts[1]).encode("ascii")
    try:
        expected = _sign(signing_input, key)
        got = _b64url_decode(parts[2])
    except Exception:
        raise BadSignature("token encoding invalid")
    if not hmac.compare_digest(expected, got):
        raise BadSignature("token signature does not verify")
    try:
        payload = json.loads(_b64url_decode(parts[1]))
        subject = str(payload["sub"])
        exp = int(payload["exp"])
    except Exception:
        raise BadSignature("token payload invalid")
    if exp <= time.time():
        raise Expired("token has expired")
    return Principal(subject, exp, tuple(payload.get("scopes", ())))
