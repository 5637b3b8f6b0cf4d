from ncp.catalog import catalog

# (d, n) pairs of the G(d,d,n) test grid
GRID = [(d, n) for d in range(2, 6) for n in range(2, 6)
        if catalog("gddn", d, n).catalan <= 5000]
SMALL_GRID = [(d, n) for d, n in GRID if n <= 4]
