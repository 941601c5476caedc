"""Startup: parse flags, build the app, hand it to uvicorn."""

import argparse

import uvicorn

from zsc_server.app import Settings, create_app


def build_arg_parser():
    parser = argparse.ArgumentParser(
        prog="zsc-server",
        description="serve zero-shot label scoring over HTTP")
    parser.add_argument("--model", required=True,
                        help="embedding table path, or a transformers model id")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--max-labels", type=int, default=128,
                        help="reject requests with more labels than this")
    parser.add_argument("--batch-size", type=int, default=16,
                        help="labels scored per model call (nli backend)")
    return parser


def main(argv=None):
    args = build_arg_parser().parse_args(argv)
    settings = Settings(model=args.model, max_labels=args.max_labels,
                        batch_size=args.batch_size)
    app = create_app(settings)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
