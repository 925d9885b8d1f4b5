"""Regenerate the JSON bundles in fixtures/ from the Python fixtures."""

import os
import sys

from tannaka.shipped import write_shipped

root = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "fixtures")
for path in write_shipped(root):
    print(os.path.relpath(path))
