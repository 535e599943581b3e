"""
popmatch - Main Launcher
========================
Entry point that reads the command table from _internals/config/config.py.

With arguments, runs one command and exits with its code:
    python launcher.py solve instance.txt --trace
Without arguments, shows the menu of enabled commands and reads command
lines until "q".
"""

import io
import os
import shlex
import sys

# UTF-8 output for Windows consoles
if sys.platform == 'win32':
    try:
        sys.stdout.reconfigure(encoding='utf-8', line_buffering=True)
        sys.stderr.reconfigure(encoding='utf-8', line_buffering=True)
    except Exception:
        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', line_buffering=True)
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8', line_buffering=True)

BASE_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.join(BASE_DIR, "_internals", "config"))
sys.path.insert(0, os.path.join(BASE_DIR, "_internals"))

try:
    import config
except ImportError:
    print("ERROR: Could not find config.py")
    print(f"Expected location: {os.path.join(BASE_DIR, '_internals', 'config', 'config.py')}")
    sys.exit(1)

from popmatch import cli  # noqa: E402

# ============================================================================
# MAIN LOOP
# ============================================================================

def interactive():
    """Menu loop; each line is parsed exactly like a command line."""
    if config.DEBUG:
        config.print_config_info()
    while True:
        cli.print_menu()
        try:
            line = input("\npopmatch> ").strip()
        except EOFError:
            return 0
        if line.lower() in ("q", "quit", "exit"):
            return 0
        if not line:
            continue
        try:
            argv = shlex.split(line)
        except ValueError as e:
            print(f"[ERROR] {e}")
            continue
        try:
            code = cli.main(argv)
        except SystemExit as e:  # argparse usage errors and --help
            code = e.code
        print(f"\n(exit code {code})")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        return interactive()
    return cli.main(argv)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\nLauncher interrupted. Exiting.")
        sys.exit(cli.EXIT_INTERRUPTED)
