"""NumPy fallback for the compiled gather/scatter kernels."""

BACKEND = "python"


def wedge_gather(spectrum, support, weights, wrapped, out):
    out[wrapped] = weights * spectrum[support]


def wedge_scatter(spectrum, support, weights, wrapped, rect):
    spectrum[support] += weights * rect[wrapped]
