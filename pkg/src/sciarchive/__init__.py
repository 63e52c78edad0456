"""Digital scientific-archive backend.

Subpackages:
    amsbib     -- structured bibliographic markup: tokenizer, parser, renderers
    archive    -- persistent catalog of journals, articles, persons, organizations
    citegraph  -- reference resolution and the forward-link citation graph
    metrics    -- citation counts and impact factors (integral / restricted)
    editorial  -- manuscript submission and tracking workflow
    gateway    -- HTTP/JSON API and admin CLI
"""

__version__ = "0.1.0"
