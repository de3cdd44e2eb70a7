"""Minimal OpenAI-compatible chat completion caller with retries."""

import json
import logging
import urllib.error
import urllib.request

from agentclient.config import ClientConfig

__all__ = ["ApiError", "complete"]

log = logging.getLogger(__name__)


class ApiError(RuntimeError):
    """The endpoint failed or answered with an unusable body."""


def _post_once(payload: dict, config: ClientConfig, api_key: str) -> str:
    request = urllib.request.Request(
        config.completions_url,
        data=json.dumps(payload).encode("utf-8"),
        headers={
            "Content-Type": "application/json",
            "Authorization": f"Bearer {api_key}",
        },
        method="POST",
    )
    try:
        with urllib.request.urlopen(request, timeout=config.timeout_s) as reply:
            body = reply.read().decode("utf-8")
    except urllib.error.HTTPError as e:
        raise ApiError(f"HTTP {e.code} from {config.completions_url}") from None
    except (urllib.error.URLError, TimeoutError, OSError) as e:
        raise ApiError(f"cannot reach {config.completions_url}: {e}") from None
    try:
        content = json.loads(body)["choices"][0]["message"]["content"]
    except (json.JSONDecodeError, KeyError, IndexError, TypeError):
        raise ApiError("response body is not a chat completion") from None
    if not isinstance(content, str):
        raise ApiError("completion content is not text")
    return content


def complete(payload: dict, config: ClientConfig, api_key: str) -> str:
    """Return the model text, retrying transient failures.

    Raises ApiError only after ``max_retries`` additional attempts fail.
    """
    attempts = config.max_retries + 1
    for attempt in range(attempts):
        try:
            return _post_once(payload, config, api_key)
        except ApiError as e:
            if attempt + 1 == attempts:
                raise
            log.warning("attempt %d/%d failed: %s", attempt + 1, attempts, e)
    raise AssertionError("unreachable")
