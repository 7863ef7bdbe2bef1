"""Order/inventory parsing, warehouse assignment, and flow aggregation.

CSV layouts (UTF-8, comma-separated, '.' decimal):

    orders:     order_id,shipper_lon,shipper_lat,dest_lon,dest_lat,quantity,
                value_usd,category_lvl1,category_lvl2,category_lvl3,date
    warehouses: id,lon,lat,name
    regions:    label,lon,lat
    inventory:  warehouse_id,sku,stock,category_lvl1,category_lvl2,category_lvl3

Malformed rows are excluded and counted, never fatal; a missing header or an
unreadable stream is fatal. Currency is carried as exact integer cents.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from datetime import date as _date
from typing import Callable, Iterable, TextIO

from .errors import InputError, ParseError
from .geo import GeoPoint, haversine_km, planar_deg_distance

ORDER_COLUMNS = (
    "order_id", "shipper_lon", "shipper_lat", "dest_lon", "dest_lat",
    "quantity", "value_usd", "category_lvl1", "category_lvl2",
    "category_lvl3", "date",
)
WAREHOUSE_COLUMNS = ("id", "lon", "lat", "name")
REGION_COLUMNS = ("label", "lon", "lat")
INVENTORY_COLUMNS = (
    "warehouse_id", "sku", "stock", "category_lvl1", "category_lvl2", "category_lvl3",
)


@dataclass(frozen=True)
class OrderRecord:
    order_id: str
    shipper: GeoPoint
    destination: GeoPoint
    quantity: int
    value_cents: int
    category_lvl1: str
    category_lvl2: str
    category_lvl3: str
    date: str

    @property
    def value_usd(self) -> float:
        return self.value_cents / 100.0


@dataclass(frozen=True)
class Warehouse:
    id: str
    location: GeoPoint
    display_name: str


@dataclass(frozen=True)
class InventoryRecord:
    warehouse_id: str
    sku: str
    stock: int
    category_lvl1: str
    category_lvl2: str
    category_lvl3: str


@dataclass
class FlowEdge:
    """One aggregated warehouse-to-region flow."""

    origin_warehouse: str
    origin_location: GeoPoint
    dest_region: str
    dest_centroid: GeoPoint
    order_count: int
    total_value_cents: int
    category_hist: dict[str, int]
    length_km: float

    @property
    def flow_id(self) -> str:
        return f"{self.origin_warehouse}:{self.dest_region}"

    @property
    def total_value_usd(self) -> float:
        return self.total_value_cents / 100.0


@dataclass
class ExclusionReport:
    """Counts of rows dropped during parsing/aggregation, by reason."""

    total_rows: int = 0
    included: int = 0
    reasons: Counter = field(default_factory=Counter)

    @property
    def excluded(self) -> int:
        return sum(self.reasons.values())

    def add(self, reason: str) -> None:
        self.reasons[reason] += 1

    def merge(self, other: "ExclusionReport") -> None:
        self.total_rows += other.total_rows
        self.included += other.included
        self.reasons.update(other.reasons)

    def to_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "included": self.included,
            "excluded": self.excluded,
            "reasons": dict(sorted(self.reasons.items())),
        }


RegionCentroidTable = dict[str, GeoPoint]


def _reader(source: TextIO, required: tuple[str, ...], what: str) -> csv.DictReader:
    try:
        reader = csv.DictReader(source)
        header = reader.fieldnames
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise ParseError(f"unreadable {what} stream: {exc}") from exc
    if header is None:
        raise ParseError(f"{what} stream is empty (missing header row)")
    missing = [c for c in required if c not in header]
    if missing:
        raise ParseError(f"{what} header is missing columns {missing}")
    return reader


def _parse_coord(lon_raw: str | None, lat_raw: str | None) -> GeoPoint | str:
    """Returns a GeoPoint or an exclusion reason string."""
    if lon_raw is None or lat_raw is None or lon_raw.strip() == "" or lat_raw.strip() == "":
        return "missing coordinate"
    try:
        lon = float(lon_raw)
        lat = float(lat_raw)
    except ValueError:
        return "non-numeric coordinate"
    try:
        return GeoPoint(lon, lat)
    except InputError:
        return "out-of-range coordinate"


def parse_orders(source: TextIO) -> tuple[list[OrderRecord], ExclusionReport]:
    reader = _reader(source, ORDER_COLUMNS, "orders")
    report = ExclusionReport()
    records: list[OrderRecord] = []
    for row in reader:
        report.total_rows += 1
        missing = [c for c in ORDER_COLUMNS if row.get(c) is None]
        if missing:
            report.add("missing field")
            continue
        shipper = _parse_coord(row["shipper_lon"], row["shipper_lat"])
        if isinstance(shipper, str):
            report.add(shipper)
            continue
        dest = _parse_coord(row["dest_lon"], row["dest_lat"])
        if isinstance(dest, str):
            report.add(dest)
            continue
        try:
            quantity = int(row["quantity"])
        except ValueError:
            report.add("non-numeric value")
            continue
        if quantity < 1:
            report.add("invalid quantity")
            continue
        try:
            cents = int((Decimal(row["value_usd"]) * 100).to_integral_value())
        except InvalidOperation:
            report.add("non-numeric value")
            continue
        if cents < 0:
            report.add("negative value")
            continue
        if row["category_lvl1"].strip() == "":
            report.add("missing field")
            continue
        date_raw = row["date"].strip()
        try:
            _date.fromisoformat(date_raw)
        except ValueError:
            report.add("invalid date")
            continue
        records.append(OrderRecord(
            order_id=row["order_id"],
            shipper=shipper,
            destination=dest,
            quantity=quantity,
            value_cents=cents,
            category_lvl1=row["category_lvl1"].strip(),
            category_lvl2=row["category_lvl2"].strip(),
            category_lvl3=row["category_lvl3"].strip(),
            date=date_raw,
        ))
        report.included += 1
    return records, report


def parse_inventory(source: TextIO) -> tuple[list[InventoryRecord], ExclusionReport]:
    reader = _reader(source, INVENTORY_COLUMNS, "inventory")
    report = ExclusionReport()
    records: list[InventoryRecord] = []
    for row in reader:
        report.total_rows += 1
        if any(row.get(c) is None for c in INVENTORY_COLUMNS):
            report.add("missing field")
            continue
        if row["warehouse_id"].strip() == "" or row["category_lvl1"].strip() == "":
            report.add("missing field")
            continue
        try:
            stock = int(row["stock"])
        except ValueError:
            report.add("non-numeric value")
            continue
        if stock < 0:
            report.add("negative stock")
            continue
        records.append(InventoryRecord(
            warehouse_id=row["warehouse_id"].strip(),
            sku=row["sku"].strip(),
            stock=stock,
            category_lvl1=row["category_lvl1"].strip(),
            category_lvl2=row["category_lvl2"].strip(),
            category_lvl3=row["category_lvl3"].strip(),
        ))
        report.included += 1
    return records, report


def load_warehouses(source: TextIO) -> list[Warehouse]:
    reader = _reader(source, WAREHOUSE_COLUMNS, "warehouses")
    out: list[Warehouse] = []
    for row in reader:
        try:
            out.append(Warehouse(
                id=row["id"].strip(),
                location=GeoPoint(float(row["lon"]), float(row["lat"])),
                display_name=row["name"].strip(),
            ))
        except (TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"bad warehouse row {row!r}: {exc}") from exc
    if not out:
        raise ParseError("warehouse file contains no rows")
    ids = [w.id for w in out]
    if len(set(ids)) != len(ids):
        raise ParseError("warehouse ids must be unique")
    locs = {(w.location.lon, w.location.lat) for w in out}
    if len(locs) != len(out):
        raise ParseError("warehouse locations must be distinct")
    return out


def load_regions(source: TextIO) -> RegionCentroidTable:
    reader = _reader(source, REGION_COLUMNS, "regions")
    table: RegionCentroidTable = {}
    for row in reader:
        try:
            label = row["label"].strip()
            point = GeoPoint(float(row["lon"]), float(row["lat"]))
        except (TypeError, ValueError, AttributeError) as exc:
            raise ParseError(f"bad region row {row!r}: {exc}") from exc
        if label in table:
            raise ParseError(f"duplicate region label {label!r}")
        table[label] = point
    if not table:
        raise ParseError("region file contains no rows")
    return table


def assign_nearest_warehouse(order: OrderRecord, warehouses: list[Warehouse]) -> str:
    """Nearest warehouse by raw planar distance on (lon, lat) degrees.

    Ties go to the lexicographically smallest warehouse id.
    """
    if not warehouses:
        raise InputError("warehouse list is empty")
    best_id = None
    best_d = float("inf")
    for w in sorted(warehouses, key=lambda w: w.id):
        d = planar_deg_distance(order.shipper, w.location)
        if d < best_d:
            best_d = d
            best_id = w.id
    return best_id


def nearest_region_assigner(regions: RegionCentroidTable) -> Callable[[GeoPoint], str | None]:
    """Default destination-to-region rule: nearest centroid, planar on degrees."""
    if not regions:
        raise InputError("region table is empty")
    labels = sorted(regions)

    def assign(p: GeoPoint) -> str:
        best_label = labels[0]
        best_d = float("inf")
        for label in labels:
            c = regions[label]
            d = (p.lon - c.lon) ** 2 + (p.lat - c.lat) ** 2
            if d < best_d:
                best_d = d
                best_label = label
        return best_label

    return assign


def _accumulate(
    acc: dict[tuple[str, str], list],
    order: OrderRecord,
    warehouse_id: str,
    region: str,
) -> None:
    key = (warehouse_id, region)
    slot = acc.get(key)
    if slot is None:
        acc[key] = [1, order.value_cents, Counter({order.category_lvl1: 1})]
    else:
        slot[0] += 1
        slot[1] += order.value_cents
        slot[2][order.category_lvl1] += 1


def merge_partials(
    a: dict[tuple[str, str], list],
    b: dict[tuple[str, str], list],
) -> dict[tuple[str, str], list]:
    """Merge two partial aggregation maps; associative and commutative."""
    out = {k: [v[0], v[1], Counter(v[2])] for k, v in a.items()}
    for key, slot in b.items():
        mine = out.get(key)
        if mine is None:
            out[key] = [slot[0], slot[1], Counter(slot[2])]
        else:
            mine[0] += slot[0]
            mine[1] += slot[1]
            mine[2].update(slot[2])
    return out


def flows_from_partials(
    acc: dict[tuple[str, str], list],
    warehouses: list[Warehouse],
    regions: RegionCentroidTable,
) -> list[FlowEdge]:
    wh_by_id = {w.id: w for w in warehouses}
    flows = []
    for (wid, region), (count, cents, hist) in sorted(acc.items()):
        origin = wh_by_id[wid].location
        centroid = regions[region]
        flows.append(FlowEdge(
            origin_warehouse=wid,
            origin_location=origin,
            dest_region=region,
            dest_centroid=centroid,
            order_count=count,
            total_value_cents=cents,
            category_hist=dict(sorted(hist.items())),
            length_km=haversine_km(origin, centroid),
        ))
    return flows


def aggregate_flows(
    orders: Iterable[OrderRecord],
    warehouses: list[Warehouse],
    regions: RegionCentroidTable,
    assign_region: Callable[[GeoPoint], str | None] | None = None,
) -> tuple[list[FlowEdge], ExclusionReport]:
    """Group orders into one flow per occupied (warehouse, region) pair.

    Orders whose destination maps to no region are excluded and reported.
    Output is sorted by (warehouse id, region label) and independent of input
    order.
    """
    if not warehouses:
        raise InputError("warehouse list is empty")
    if assign_region is None:
        assign_region = nearest_region_assigner(regions)
    report = ExclusionReport()
    acc: dict[tuple[str, str], list] = {}
    for order in orders:
        report.total_rows += 1
        region = assign_region(order.destination)
        if region is None or region not in regions:
            report.add("no region mapping")
            continue
        wid = assign_nearest_warehouse(order, warehouses)
        _accumulate(acc, order, wid, region)
        report.included += 1
    return flows_from_partials(acc, warehouses, regions), report


def flow_to_dict(flow: FlowEdge) -> dict:
    return {
        "origin_warehouse": flow.origin_warehouse,
        "origin_lon": flow.origin_location.lon,
        "origin_lat": flow.origin_location.lat,
        "dest_region": flow.dest_region,
        "dest_lon": flow.dest_centroid.lon,
        "dest_lat": flow.dest_centroid.lat,
        "order_count": flow.order_count,
        "total_value_usd": flow.total_value_cents / 100.0,
        "category_hist": dict(sorted(flow.category_hist.items())),
        "length_km": flow.length_km,
    }


def flow_from_dict(data: dict) -> FlowEdge:
    try:
        return FlowEdge(
            origin_warehouse=str(data["origin_warehouse"]),
            origin_location=GeoPoint(float(data["origin_lon"]), float(data["origin_lat"])),
            dest_region=str(data["dest_region"]),
            dest_centroid=GeoPoint(float(data["dest_lon"]), float(data["dest_lat"])),
            order_count=int(data["order_count"]),
            total_value_cents=round(float(data["total_value_usd"]) * 100),
            category_hist={str(k): int(v) for k, v in data.get("category_hist", {}).items()},
            length_km=float(data["length_km"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad flow record: {exc}") from exc
