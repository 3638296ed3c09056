#!/usr/bin/env python3
"""
kwitness - Main Entry Point

Runs one kwitness command. Run this file directly, or use the installed
`kwitness` / `kw` console scripts.

Usage:
    python main.py COMMAND [options] [inputs]

Options:
    --debug         Enable debug mode with verbose logging
    --log-level     Set logging level (DEBUG, INFO, WARNING, ERROR)
    --config        Configuration file (default: kwitness_config.yml)
    --human         Write a human-readable report instead of a document
    --out           Write output to a file instead of stdout
    --ring          Ring for generated data and expected by inputs
    --version       Show version information
    --help          Show this help message
"""

import sys
import os

# Add the scripts directory to the Python path
project_root = os.path.dirname(os.path.abspath(__file__))
scripts_path = os.path.join(project_root, 'scripts')
sys.path.insert(0, scripts_path)


def main():
    """Main entry point for the application."""
    try:
        from kwitness.cli import main as run_cli

        return run_cli(sys.argv[1:])

    except KeyboardInterrupt:
        sys.stderr.write("\nInterrupted by user\n")
        return 130  # Standard exit code for Ctrl+C

    except ImportError as e:
        sys.stderr.write(f"Import Error: {e}\n")
        sys.stderr.write("Make sure all required dependencies are installed.\n")
        sys.stderr.write("Run: pip install -r requirements.txt\n")
        return 1


if __name__ == '__main__':
    sys.exit(main())
