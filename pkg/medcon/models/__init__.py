"""
Domain models package
"""
from medcon.models.graph import Graph
from medcon.models.partition import Partition, MembershipMatrix
from medcon.models.consensus import ConsensusState, MoveProposal, ConsensusOptions
from medcon.models.grouping import PartitionDistanceGraph, EnsembleGrouping, SweepRecord
from medcon.models.report import ConsensusResult, RunReport

__all__ = [
    'Graph', 'Partition', 'MembershipMatrix',
    'ConsensusState', 'MoveProposal', 'ConsensusOptions',
    'PartitionDistanceGraph', 'EnsembleGrouping', 'SweepRecord',
    'ConsensusResult', 'RunReport'
]
