#!/usr/bin/env python3
"""
Generate a default experiment config file

Writes the KEY=value configuration for one subcommand with its defaults, so
it can be edited and passed back with --config.
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from experiments.config import (  # noqa: E402
    EXPERIMENT_KINDS,
    ExperimentConfig,
    render_config,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

HEADER = """# Laurent Lab experiment configuration ({kind})
# Lists are comma-separated; lists of literals are semicolon-separated.
# Symbols: trigpoly: c_-n,...,c_n | hat(peak,width) | step(a,b,h) | const(c)
# Spaces:  lebesgue(p) | lorentz(p,q) | orlicz(power,p) | orlicz(log_power,p,s)
#          | orlicz(piecewise,p0,p1)
# Weights: const(c) | power(g) | power(g,half) | table(...) | halftable(...)
#          optionally followed by ^e
"""


def generate_config_text(kind: str) -> str:
    """Commented default configuration for ``kind``."""
    config = ExperimentConfig(kind=kind).validate()
    return HEADER.format(kind=kind) + render_config(config)


def main():
    parser = argparse.ArgumentParser(
        description="Write a default experiment configuration file"
    )
    parser.add_argument("kind", choices=EXPERIMENT_KINDS, help="Subcommand")
    parser.add_argument("--out", help="Output path (stdout when omitted)")
    args = parser.parse_args()

    text = generate_config_text(args.kind)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
        logger.info(f"Wrote {args.kind} configuration to {args.out}")
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
