"""
Line reader shared by the edge-list, partition and ensemble formats
"""


def strip_comment(raw):
    """Drop a trailing '#' comment and surrounding whitespace (CRLF included)"""
    hash_at = raw.find('#')
    if hash_at >= 0:
        raw = raw[:hash_at]
    return raw.strip()


def data_lines(source):
    """Yield (line_no, text) for every line left non-blank after comment stripping"""
    for line_no, raw in enumerate(source, start=1):
        line = strip_comment(raw)
        if line:
            yield line_no, line
