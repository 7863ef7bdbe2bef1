import io
import random
from collections import Counter, defaultdict

import pytest

from flowscene.errors import InputError, ParseError
from flowscene.geo import GeoPoint
from flowscene.ingest import (
    ORDER_COLUMNS,
    OrderRecord,
    Warehouse,
    aggregate_flows,
    assign_nearest_warehouse,
    flow_from_dict,
    flow_to_dict,
    load_regions,
    load_warehouses,
    merge_partials,
    nearest_region_assigner,
    parse_inventory,
    parse_orders,
)

HEADER = ",".join(ORDER_COLUMNS)


def orders_csv(rows):
    return io.StringIO(HEADER + "\n" + "\n".join(rows) + "\n")


def good_row(i=1, dest="-80.0,35.0", cat="Electronics"):
    return f"ORD-{i:04d},-118.0,34.0,{dest},2,19.99,{cat},Sub,Leaf,2025-07-15"


WAREHOUSES = [
    Warehouse("WH-CA", GeoPoint(-118.0, 34.0), "CA"),
    Warehouse("WH-NJ", GeoPoint(-74.0, 40.0), "NJ"),
]
REGIONS = {"E": GeoPoint(-80.0, 35.0), "W": GeoPoint(-115.0, 36.0)}


def test_parse_three_good_rows():
    records, report = parse_orders(orders_csv([good_row(i) for i in range(3)]))
    assert len(records) == 3
    assert report.total_rows == 3 and report.excluded == 0
    assert records[0].value_cents == 1999
    assert records[0].quantity == 2


def test_parse_missing_destination_latitude():
    row = "ORD-1,-118.0,34.0,-80.0,,1,5.00,A,B,C,2025-07-01"
    records, report = parse_orders(orders_csv([row]))
    assert records == []
    assert report.reasons["missing coordinate"] == 1


def test_parse_reason_buckets():
    rows = [
        "ORD-1,-118.0,34.0,abc,35.0,1,5.00,A,B,C,2025-07-01",   # non-numeric coord
        "ORD-2,-118.0,34.0,-80.0,95.0,1,5.00,A,B,C,2025-07-01",  # out of range
        "ORD-3,-118.0,34.0,-80.0,35.0,x,5.00,A,B,C,2025-07-01",  # non-numeric qty
        "ORD-4,-118.0,34.0,-80.0,35.0,0,5.00,A,B,C,2025-07-01",  # qty < 1
        "ORD-5,-118.0,34.0,-80.0,35.0,1,-2.00,A,B,C,2025-07-01",  # negative value
        "ORD-6,-118.0,34.0,-80.0,35.0,1,5.00,,B,C,2025-07-01",   # empty lvl1
        "ORD-7,-118.0,34.0,-80.0,35.0,1,5.00,A,B,C,not-a-date",  # bad date
    ]
    records, report = parse_orders(orders_csv(rows))
    assert records == []
    assert report.excluded == 7
    assert report.reasons["non-numeric coordinate"] == 1
    assert report.reasons["out-of-range coordinate"] == 1
    assert report.reasons["non-numeric value"] == 1
    assert report.reasons["invalid quantity"] == 1
    assert report.reasons["negative value"] == 1
    assert report.reasons["missing field"] == 1
    assert report.reasons["invalid date"] == 1


def test_parse_thousand_rows_with_corruption():
    rows = []
    for i in range(1000):
        if i % 67 == 3 and len([r for r in rows if ",," in r]) < 15:
            rows.append(f"ORD-{i},-118.0,34.0,,35.0,1,5.00,A,B,C,2025-07-01")
        else:
            rows.append(good_row(i))
    corrupt = sum(1 for r in rows if ",," in r)
    assert corrupt == 15
    records, report = parse_orders(orders_csv(rows))
    assert len(records) == 985
    assert report.excluded == 15
    assert report.total_rows == 1000


def test_parse_empty_stream_is_fatal():
    with pytest.raises(ParseError, match="missing header"):
        parse_orders(io.StringIO(""))


def test_parse_missing_column_is_fatal():
    with pytest.raises(ParseError, match="missing columns"):
        parse_orders(io.StringIO("order_id,quantity\n1,2\n"))


def test_assign_nearest_is_planar_degrees():
    # sqrt(18^2 + 6^2) = 18.97 beats 26 even though the haversine gap is closer
    order = OrderRecord("o", GeoPoint(-100.0, 40.0), GeoPoint(-80, 35), 1, 100, "A", "", "", "2025-07-01")
    assert assign_nearest_warehouse(order, WAREHOUSES) == "WH-CA"


def test_assign_at_warehouse_location():
    order = OrderRecord("o", GeoPoint(-74.0, 40.0), GeoPoint(-80, 35), 1, 100, "A", "", "", "2025-07-01")
    assert assign_nearest_warehouse(order, WAREHOUSES) == "WH-NJ"


def test_assign_tie_breaks_lexicographically():
    ws = [
        Warehouse("WH-B", GeoPoint(0.0, 0.0), "B"),
        Warehouse("WH-A", GeoPoint(10.0, 0.0), "A"),
    ]
    order = OrderRecord("o", GeoPoint(5.0, 0.0), GeoPoint(0, 0), 1, 100, "A", "", "", "2025-07-01")
    assert assign_nearest_warehouse(order, ws) == "WH-A"


def test_assign_empty_warehouses():
    order = OrderRecord("o", GeoPoint(0, 0), GeoPoint(0, 0), 1, 100, "A", "", "", "2025-07-01")
    with pytest.raises(InputError):
        assign_nearest_warehouse(order, [])


def _mk_order(i, shipper, dest, cat="A", cents=100):
    return OrderRecord(f"o{i}", GeoPoint(*shipper), GeoPoint(*dest), 1, cents, cat, "", "", "2025-07-01")


def test_aggregate_same_pair_collapses():
    orders = [_mk_order(i, (-118, 34), (-80, 35)) for i in range(3)]
    flows, report = aggregate_flows(orders, WAREHOUSES, REGIONS)
    assert len(flows) == 1
    assert flows[0].order_count == 3
    assert flows[0].origin_warehouse == "WH-CA"
    assert flows[0].dest_region == "E"
    assert report.included == 3


def test_aggregate_two_by_two():
    orders = [
        _mk_order(0, (-118, 34), (-80, 35)),
        _mk_order(1, (-118, 34), (-115, 36)),
        _mk_order(2, (-74, 40), (-80, 35)),
        _mk_order(3, (-74, 40), (-115, 36)),
    ]
    flows, _ = aggregate_flows(orders, WAREHOUSES, REGIONS)
    assert len(flows) == 4
    assert {(f.origin_warehouse, f.dest_region) for f in flows} == {
        ("WH-CA", "E"), ("WH-CA", "W"), ("WH-NJ", "E"), ("WH-NJ", "W"),
    }


def test_aggregate_no_region_mapping_excludes():
    orders = [_mk_order(0, (-118, 34), (-80, 35))]
    flows, report = aggregate_flows(orders, WAREHOUSES, REGIONS, assign_region=lambda p: None)
    assert flows == []
    assert report.reasons["no region mapping"] == 1


def test_aggregate_conservation_and_permutation_invariance():
    rng = random.Random(5)
    orders = []
    for i in range(500):
        dest = (-80.0 + rng.uniform(-3, 3), 35.0 + rng.uniform(-3, 3)) if rng.random() < 0.5 \
            else (-115.0 + rng.uniform(-3, 3), 36.0 + rng.uniform(-3, 3))
        shipper = (-118, 34) if rng.random() < 0.6 else (-74, 40)
        orders.append(_mk_order(i, shipper, dest, cat=rng.choice("ABC"), cents=rng.randrange(0, 10000)))
    flows, report = aggregate_flows(orders, WAREHOUSES, REGIONS)
    assert sum(f.order_count for f in flows) + report.excluded == len(orders)
    assert sum(f.total_value_cents for f in flows) == sum(o.value_cents for o in orders)
    for f in flows:
        assert sum(f.category_hist.values()) == f.order_count

    shuffled = orders[:]
    rng.shuffle(shuffled)
    flows2, _ = aggregate_flows(shuffled, WAREHOUSES, REGIONS)
    assert flows == flows2


def test_aggregate_matches_group_by_oracle():
    rng = random.Random(11)
    orders = []
    for i in range(300):
        dest = (rng.uniform(-120, -70), rng.uniform(30, 45))
        shipper = (rng.uniform(-120, -70), rng.uniform(30, 45))
        orders.append(_mk_order(i, shipper, dest, cat=rng.choice("AB")))
    assign = nearest_region_assigner(REGIONS)
    oracle = defaultdict(int)
    for o in orders:
        oracle[(assign_nearest_warehouse(o, WAREHOUSES), assign(o.destination))] += 1
    flows, _ = aggregate_flows(orders, WAREHOUSES, REGIONS)
    assert {(f.origin_warehouse, f.dest_region): f.order_count for f in flows} == dict(oracle)


def test_partial_merge_is_associative_and_commutative():
    rng = random.Random(3)
    orders = [
        _mk_order(i, (-118, 34) if rng.random() < 0.5 else (-74, 40),
                  (-80, 35) if rng.random() < 0.5 else (-115, 36),
                  cat=rng.choice("ABCD"), cents=rng.randrange(1000))
        for i in range(120)
    ]
    from flowscene.ingest import _accumulate  # partials built the same way aggregate does
    assign = nearest_region_assigner(REGIONS)

    def partial(chunk):
        acc = {}
        for o in chunk:
            _accumulate(acc, o, assign_nearest_warehouse(o, WAREHOUSES), assign(o.destination))
        return acc

    a, b, c = partial(orders[:40]), partial(orders[40:90]), partial(orders[90:])
    left = merge_partials(merge_partials(a, b), c)
    right = merge_partials(a, merge_partials(b, c))
    swapped = merge_partials(merge_partials(c, b), a)
    assert left == right == swapped
    whole = partial(orders)
    assert left == whole


def test_parse_inventory():
    src = io.StringIO(
        "warehouse_id,sku,stock,category_lvl1,category_lvl2,category_lvl3\n"
        "WH-CA,SKU-1,10,A,B,C\n"
        "WH-CA,SKU-2,-4,A,B,C\n"
    )
    records, report = parse_inventory(src)
    assert len(records) == 1
    assert report.reasons["negative stock"] == 1


def test_parse_inventory_bulk():
    lines = ["warehouse_id,sku,stock,category_lvl1,category_lvl2,category_lvl3"]
    lines += [f"WH-CA,SKU-{i},5,A,B,C" for i in range(4000)]
    records, report = parse_inventory(io.StringIO("\n".join(lines) + "\n"))
    assert len(records) == 4000 and report.excluded == 0


def test_load_warehouses_validation():
    with pytest.raises(ParseError, match="unique"):
        load_warehouses(io.StringIO("id,lon,lat,name\nA,0,0,x\nA,1,1,y\n"))
    with pytest.raises(ParseError, match="distinct"):
        load_warehouses(io.StringIO("id,lon,lat,name\nA,0,0,x\nB,0,0,y\n"))


def test_load_regions_validation():
    with pytest.raises(ParseError, match="duplicate"):
        load_regions(io.StringIO("label,lon,lat\nE,0,0\nE,1,1\n"))


def test_flow_dict_round_trip():
    orders = [_mk_order(0, (-118, 34), (-80, 35), cents=12345)]
    flows, _ = aggregate_flows(orders, WAREHOUSES, REGIONS)
    restored = flow_from_dict(flow_to_dict(flows[0]))
    assert restored == flows[0]
