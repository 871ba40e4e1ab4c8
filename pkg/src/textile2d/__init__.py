"""Textile systems, 2-graphs, and the insplitting moves between them."""
from .errors import (BlockMapError, GraphError, HomomorphismError, HypothesisError,
                     InjectivityError, NotLRError, PairingError, ParseError, PartitionError,
                     SizeGuardError, TextileError, TwoGraphError)
from .graph import (DirectedGraph, GraphHom, GraphInsplitPartition, count_paths,
                    graphs_isomorphic, insplit_graph, is_essential_graph, validate_hom)
from .textile import (LiftingReport, SquareView, TextileSystem, build_textile,
                      insplit_textile_jm, invert_textile, is_essential_textile,
                      lifting_report)
from .twograph import (CommutingSquare, TwoColoredGraph, TwoGraph, TwoGraphInsplitPartition,
                       check_pairing, enumerate_pairing_partitions, insplit_twograph,
                       is_essential_twograph, textile_to_twograph, twograph_to_textile,
                       validate_twograph)
from .shiftspace import (BlockMap, RectBlock, apply_block_map, enumerate_blocks,
                         jm_conjugacy_block_maps, lift_row, transpose_block,
                         verify_conjugacy_on_blocks)
from .moves import (DerivedPartitions, PipelineResult, derive_partitions,
                    roundtrip_equivalences, thm61_pipeline, thm_lr_insplit, thm_main_iii,
                    thm_priyanga)
from .cli_io import SpecDocument, load_fixture, parse_spec, serialize

__version__ = "0.1.0"
