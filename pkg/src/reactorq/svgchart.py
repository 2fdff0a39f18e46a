"""Small deterministic SVG line-chart writer (no plotting stack).

One polyline per series, fixed layout, legend at the top right. Identical
inputs produce byte-identical files.
"""

PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT = 70, 160
MARGIN_TOP, MARGIN_BOTTOM = 40, 60
N_TICKS = 5


def _escape(text):
    return (str(text).replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _fmt(value):
    return f"{value:.6g}"


def emit_svg(series, path, title="", x_label="", y_label=""):
    """Write a line chart; `series` is a list of (name, xs, ys) tuples."""
    if not series:
        raise ValueError("emit_svg needs at least one series")
    for name, xs, ys in series:
        if len(xs) != len(ys) or len(xs) == 0:
            raise ValueError(f"series {name!r} must have matching, nonempty x/y")

    all_x = [float(x) for _, xs, _ in series for x in xs]
    all_y = [float(y) for _, _, ys in series for y in ys]
    x_min, x_max = min(all_x), max(all_x)
    y_min, y_max = min(all_y), max(all_y)
    if x_max == x_min:
        x_max = x_min + 1.0
    if y_max == y_min:
        y_max = y_min + 1.0
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x):
        return MARGIN_LEFT + plot_w * (x - x_min) / (x_max - x_min)

    def py(y):
        return MARGIN_TOP + plot_h * (1.0 - (y - y_min) / (y_max - y_min))

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333"/>',
    ]
    if title:
        lines.append(
            f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" '
            f'font-size="16" font-family="sans-serif">{_escape(title)}</text>')

    for i in range(N_TICKS + 1):
        frac = i / N_TICKS
        xv = x_min + frac * (x_max - x_min)
        yv = y_min + frac * (y_max - y_min)
        xp, yp = _fmt(px(xv)), _fmt(py(yv))
        lines.append(
            f'<line x1="{xp}" y1="{MARGIN_TOP + plot_h}" x2="{xp}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#333"/>')
        lines.append(
            f'<text x="{xp}" y="{MARGIN_TOP + plot_h + 20}" '
            f'text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{_fmt(xv)}</text>')
        lines.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{yp}" x2="{MARGIN_LEFT}" '
            f'y2="{yp}" stroke="#333"/>')
        lines.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{yp}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{_fmt(yv)}</text>')

    if x_label:
        lines.append(
            f'<text x="{MARGIN_LEFT + plot_w // 2}" y="{HEIGHT - 15}" '
            f'text-anchor="middle" font-size="13" '
            f'font-family="sans-serif">{_escape(x_label)}</text>')
    if y_label:
        lines.append(
            f'<text x="18" y="{MARGIN_TOP + plot_h // 2}" '
            f'text-anchor="middle" font-size="13" font-family="sans-serif" '
            f'transform="rotate(-90 18 {MARGIN_TOP + plot_h // 2})">'
            f'{_escape(y_label)}</text>')

    for idx, (name, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        points = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}"
                          for x, y in zip(xs, ys))
        lines.append(f'<polyline points="{points}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN_TOP + 16 + 18 * idx
        lx = WIDTH - MARGIN_RIGHT + 12
        lines.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        lines.append(f'<text x="{lx + 28}" y="{ly}" font-size="12" '
                     f'font-family="sans-serif">{_escape(name)}</text>')

    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
