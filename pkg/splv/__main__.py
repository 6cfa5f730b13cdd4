"""
python -m splv 入口
"""
import sys

from splv.workbench.cli import run

if __name__ == "__main__":
    sys.exit(run())
