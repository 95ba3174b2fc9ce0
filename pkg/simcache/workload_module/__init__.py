__all__ = ['popularity', 'request_stream']

# Local Definitions
from .popularity import (PopularityProfile,
                         hotspot_weights,
                         ingest_trace,
                         parse_hotspots,
                         read_trace_counts,
                         synth_grid_popularity,
                         write_trace_counts)
from .request_stream import RequestStream, gen_requests, read_replay, write_replay
