"""Per-warehouse category hierarchies backing the inventory sunburst."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .ingest import InventoryRecord

UNSPECIFIED = "(unspecified)"


@dataclass
class SunburstNode:
    label: str
    depth: int  # 0 = warehouse root, 1..3 = taxonomy levels
    stock_total: int = 0
    children: list["SunburstNode"] = field(default_factory=list)

    def sort_children(self) -> None:
        self.children.sort(key=lambda c: (-c.stock_total, c.label))
        for child in self.children:
            child.sort_children()

    def to_dict(self, root_total: int | None = None) -> dict:
        if root_total is None:
            root_total = self.stock_total
        return {
            "label": self.label,
            "depth": self.depth,
            "stock": self.stock_total,
            "fraction": (self.stock_total / root_total) if root_total else 0.0,
            "children": [c.to_dict(root_total) for c in self.children],
        }


def build_hierarchy(records: list[InventoryRecord], warehouse_id: str) -> SunburstNode:
    """Root -> lvl1 -> lvl2 -> lvl3 tree of integer stock totals.

    Children are ordered by descending stock (ties lexicographic) so layouts
    are reproducible. Missing lvl2/lvl3 labels group under "(unspecified)".
    """
    rows = [r for r in records if r.warehouse_id == warehouse_id]
    if not rows:
        raise InputError(f"unknown warehouse: no inventory records for {warehouse_id!r}")
    root = SunburstNode(label=warehouse_id, depth=0)
    index: dict[tuple[str, ...], SunburstNode] = {}
    for rec in rows:
        labels = (
            rec.category_lvl1,
            rec.category_lvl2 or UNSPECIFIED,
            rec.category_lvl3 or UNSPECIFIED,
        )
        root.stock_total += rec.stock
        parent = root
        for depth, label in enumerate(labels, start=1):
            key = labels[:depth]
            node = index.get(key)
            if node is None:
                node = SunburstNode(label=label, depth=depth)
                index[key] = node
                parent.children.append(node)
            node.stock_total += rec.stock
            parent = node
    root.sort_children()
    return root


def share_of_category(tree: SunburstNode, lvl1_label: str) -> float:
    """Fraction of the warehouse's stock held by one top-level category."""
    if tree.stock_total == 0:
        return 0.0
    for child in tree.children:
        if child.label == lvl1_label:
            return child.stock_total / tree.stock_total
    return 0.0


def hover_summary(node: SunburstNode, root_total: int) -> tuple[str, int, float]:
    """(label, stock count, percent of the warehouse total) for tooltips."""
    pct = 100.0 * node.stock_total / root_total if root_total else 0.0
    return (node.label, node.stock_total, pct)
