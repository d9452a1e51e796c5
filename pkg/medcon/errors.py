"""
Exception hierarchy for the consensus toolkit
"""


class MedconError(Exception):
    """Base error; `stage` names the pipeline stage that failed"""
    stage = 'medcon'

    def __init__(self, message, stage=None):
        super(MedconError, self).__init__(message)
        self.message = message
        if stage:
            self.stage = stage

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'error': self.message, 'stage': self.stage, 'type': type(self).__name__}


class ParseError(MedconError, ValueError):
    """Malformed input line"""
    stage = 'parse'

    def __init__(self, message, line=None, stage=None):
        if line is not None:
            message = f"line {line}: {message}"
        super(ParseError, self).__init__(message, stage)
        self.line = line


class ValidationError(MedconError, ValueError):
    """Input violates a structural rule (self-loop, weighted column, ...)"""
    stage = 'validate'


class CoverageError(MedconError, ValueError):
    """Partition does not cover all n vertices"""
    stage = 'partition'


class DimensionError(MedconError, ValueError):
    """Vertex counts disagree, or a required collection is empty"""
    stage = 'dimension'


class BoundsError(MedconError, IndexError):
    """Vertex or cluster id out of range"""
    stage = 'bounds'


class RangeError(MedconError, ValueError):
    """Real-valued parameter outside its allowed interval"""
    stage = 'range'


class SizeError(MedconError, ValueError):
    """Instance too large for a quadratic or exhaustive method"""
    stage = 'size'


class ContractError(MedconError, ValueError):
    """Caller broke an operation precondition"""
    stage = 'contract'
