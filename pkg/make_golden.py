import argparse

from regression.golden_figures import GOLDEN_DIR, write_goldens

parser = argparse.ArgumentParser(description="Store the golden SVG figures.")
parser.add_argument("--overwrite", action="store_true", help="replace stored figures")
args = parser.parse_args()

written = write_goldens(GOLDEN_DIR, overwrite=args.overwrite)
for name, path in written.items():
    print(f"✅ {name}: {path}")
if not written:
    print(f"All golden figures already stored in {GOLDEN_DIR}")
