"""Integer class codes shared by both kernel backends."""

CLS_LONG = 0
CLS_SHORT = 1
CLS_BYPASS = 2
CLS_EXCLUDED = 3

CLASS_NAMES = {
    CLS_LONG: "long",
    CLS_SHORT: "short",
    CLS_BYPASS: "bypass",
    CLS_EXCLUDED: "excluded",
}
