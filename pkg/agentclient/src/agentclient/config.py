"""Client configuration and credential resolution."""

import os
from dataclasses import dataclass

__all__ = ["ClientConfig", "CredentialError", "resolve_api_key"]


class CredentialError(RuntimeError):
    """The configured API key variable is unset or empty."""


@dataclass(frozen=True)
class ClientConfig:
    """Where and how to reach the chat endpoint.

    ``api_key_env`` names the environment variable holding the key; the
    key itself never appears in configuration or logs. Temperature
    defaults to 0 so identical requests give identical completions.
    """

    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "OPENAI_API_KEY"
    model: str = "gpt-4o"
    timeout_s: float = 30.0
    max_retries: int = 1
    temperature: float = 0.0

    def __post_init__(self):
        if self.timeout_s <= 0.0:
            raise ValueError(f"timeout_s must be > 0, got {self.timeout_s}")
        if self.max_retries < 0:
            raise ValueError(f"max_retries must be >= 0, got {self.max_retries}")
        if not self.base_url:
            raise ValueError("base_url must be non-empty")

    @property
    def completions_url(self) -> str:
        return self.base_url.rstrip("/") + "/chat/completions"


def resolve_api_key(config: ClientConfig) -> str:
    key = os.environ.get(config.api_key_env, "")
    if not key:
        raise CredentialError(
            f"environment variable {config.api_key_env} is unset or empty"
        )
    return key
