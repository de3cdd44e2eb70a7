"""Command-line interface: serve the protocol or inspect a payload."""

import argparse
import json
import logging
import sys
from pathlib import Path

from agentclient.config import ClientConfig, CredentialError
from agentclient.payload import MalformedRequest, build_payload
from agentclient.serve import serve_stdio, serve_tcp

__all__ = ["main"]

SAMPLE_REQUEST = Path(__file__).parent / "samples" / "request.json"


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    defaults = ClientConfig()
    parser.add_argument("--base-url", default=defaults.base_url,
                        help="OpenAI-compatible API root, e.g. http://127.0.0.1:8080/v1")
    parser.add_argument("--api-key-env", default=defaults.api_key_env,
                        help="environment variable holding the API key")
    parser.add_argument("--model", default=defaults.model)
    parser.add_argument("--timeout", type=float, default=defaults.timeout_s,
                        help="request timeout in seconds")
    parser.add_argument("--retries", type=int, default=defaults.max_retries,
                        help="extra attempts after a failed request")
    parser.add_argument("--temperature", type=float, default=defaults.temperature)


def _config_from(args: argparse.Namespace) -> ClientConfig:
    return ClientConfig(
        base_url=args.base_url,
        api_key_env=args.api_key_env,
        model=args.model,
        timeout_s=args.timeout,
        max_retries=args.retries,
        temperature=args.temperature,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llm-agent-client",
        description="Chat-API backed agent speaking the driving wire protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="answer decision requests until closed")
    serve_p.add_argument(
        "--transport",
        default="stdio",
        help="stdio (default) or tcp:<host>:<port>",
    )
    _add_config_flags(serve_p)

    dry_p = sub.add_parser("dry-run", help="print the outgoing chat payload")
    dry_p.add_argument(
        "--request",
        default=str(SAMPLE_REQUEST),
        help="decision_request JSON file (bundled sample by default)",
    )
    _add_config_flags(dry_p)
    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    config = _config_from(args)
    if args.transport == "stdio":
        serve_stdio(config)
        return 0
    if args.transport.startswith("tcp:"):
        _, host, port = args.transport.split(":", 2)
        if not host or not port.isdigit():
            raise ValueError(f"bad tcp transport {args.transport!r}")
        serve_tcp(config, host, int(port))
        return 0
    raise ValueError(f"unknown transport {args.transport!r}")


def _cmd_dry_run(args: argparse.Namespace) -> int:
    try:
        record = json.loads(Path(args.request).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise MalformedRequest(f"{args.request}: not JSON ({e.msg})") from None
    payload = build_payload(record, _config_from(args))
    print(json.dumps(payload, indent=2))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        return _cmd_dry_run(args)
    except KeyboardInterrupt:
        return 0
    except (CredentialError, MalformedRequest, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
