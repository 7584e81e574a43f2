import pathlib
import sys

# make the in-tree package (with the staged extension module) importable
sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[2] / "python"))
