"""Region growing over Information blocks.

Connected components are grown on the block grid rather than the pixel
grid, which keeps the work proportional to the number of blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import FrozenSet, List, Optional, Tuple

import numpy as np

from .background import BlockGrid

Bbox = Tuple[int, int, int, int]

_NEIGHBOURS = {
    4: ((-1, 0), (1, 0), (0, -1), (0, 1)),
    8: ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)),
}


@dataclass(frozen=True, eq=False)
class ConnectedComponent:
    """A maximal group of touching Information blocks.

    ``bbox`` is (x0, y0, x1, y1) in pixels, inclusive. ``mask`` covers the
    bbox and is True on pixels that belong to a member block.
    """

    blocks: FrozenSet[Tuple[int, int]]
    bbox: Bbox = (0, 0, -1, -1)
    h_cc: int = 0
    w_cc: int = 0
    a_cc: int = 0
    mask: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def r_w2h(self) -> float:
        return self.w_cc / self.h_cc

    def __eq__(self, other):
        if not isinstance(other, ConnectedComponent):
            return NotImplemented
        return self.blocks == other.blocks and self.bbox == other.bbox and self.a_cc == other.a_cc


def cc_features(cc: ConnectedComponent, grid: BlockGrid) -> ConnectedComponent:
    """Fill in the pixel bbox, H_cc, W_cc, A_cc and the covered-pixel mask."""
    rows = [r for r, _ in cc.blocks]
    cols = [c for _, c in cc.blocks]
    br0, br1, bc0, bc1 = min(rows), max(rows), min(cols), max(cols)

    block_mask = np.zeros((br1 - br0 + 1, bc1 - bc0 + 1), dtype=bool)
    block_mask[np.array(rows) - br0, np.array(cols) - bc0] = True
    heights = np.diff(grid.row_edges[br0 : br1 + 2])
    widths = np.diff(grid.col_edges[bc0 : bc1 + 2])
    mask = np.repeat(np.repeat(block_mask, heights, axis=0), widths, axis=1)

    x0, y0 = int(grid.col_edges[bc0]), int(grid.row_edges[br0])
    x1, y1 = int(grid.col_edges[bc1 + 1]) - 1, int(grid.row_edges[br1 + 1]) - 1
    a_cc = int(np.outer(heights, widths)[block_mask].sum())
    return replace(cc, bbox=(x0, y0, x1, y1), h_cc=y1 - y0 + 1, w_cc=x1 - x0 + 1, a_cc=a_cc, mask=mask)


def label_components(grid: BlockGrid, connectivity: int = 8) -> List[ConnectedComponent]:
    """Flood-fill the Information blocks into connected components.

    Components are returned sorted by the top-left corner of their bbox
    (y0 first, then x0), so the result does not depend on visit order.
    """
    if connectivity not in _NEIGHBOURS:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    steps = _NEIGHBOURS[connectivity]
    rows, cols = grid.information.shape
    info = grid.information.tolist()
    seen = [[False] * cols for _ in range(rows)]

    groups = []
    for r0, c0 in np.argwhere(grid.information).tolist():
        if seen[r0][c0]:
            continue
        seen[r0][c0] = True
        stack = [(r0, c0)]
        members = []
        while stack:
            r, c = stack.pop()
            members.append((r, c))
            for dr, dc in steps:
                nr, nc = r + dr, c + dc
                if 0 <= nr < rows and 0 <= nc < cols and info[nr][nc] and not seen[nr][nc]:
                    seen[nr][nc] = True
                    stack.append((nr, nc))
        groups.append(frozenset(members))

    ccs = [cc_features(ConnectedComponent(blocks=g), grid) for g in groups]
    ccs.sort(key=lambda cc: (cc.bbox[1], cc.bbox[0], min(cc.blocks)))
    return ccs
