"""
Run results and the run report
"""


class ConsensusResult:
    """Output partition of one engine run plus its convergence record"""

    def __init__(self, partition, engine='median', converged=True, applied_moves=None,
                 total_mirkin_trace=None, final_total_mirkin=None):
        self.partition = partition
        self.engine = engine
        self.converged = converged
        self.applied_moves = list(applied_moves or [])
        self.total_mirkin_trace = list(total_mirkin_trace or [])
        self.final_total_mirkin = final_total_mirkin

    @property
    def iterations(self):
        return len(self.applied_moves)

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'engine': self.engine,
            'converged': self.converged,
            'iterations': self.iterations,
            'applied_moves': self.applied_moves,
            'total_mirkin_trace': self.total_mirkin_trace,
            'final_total_mirkin': self.final_total_mirkin,
            'num_clusters': self.partition.num_clusters,
            'labels': self.partition.labels.tolist()
        }

    def __repr__(self):
        return (f'<ConsensusResult {self.engine} iterations={self.iterations} '
                f'converged={self.converged} total_mirkin={self.final_total_mirkin}>')


class RunReport:
    """Summary of a CLI/API consensus run"""

    def __init__(self, iterations=0, applied_moves=None, final_total_mirkin=0, wall_time=0.0,
                 workers=1, lambda_used=None, group_sizes=None, engine='median', converged=True,
                 n=0, k=0):
        self.iterations = iterations
        self.applied_moves = list(applied_moves or [])
        self.final_total_mirkin = final_total_mirkin
        self.wall_time = wall_time
        self.workers = workers
        self.lambda_used = lambda_used
        self.group_sizes = list(group_sizes or [])
        self.engine = engine
        self.converged = converged
        self.n = n
        self.k = k

    def to_tsv_lines(self):
        """Machine-readable report lines (tab separated)"""
        lines = ['iteration\tapplied_moves']
        lines.extend(f"{i}\t{count}" for i, count in enumerate(self.applied_moves, start=1))
        lines.append(f"final_total_mirkin\t{self.final_total_mirkin}")
        lines.append(f"converged\t{'true' if self.converged else 'false'}")
        lines.append(f"engine\t{self.engine}")
        lines.append(f"workers\t{self.workers}")
        if self.lambda_used is not None:
            lines.append(f"lambda\t{self.lambda_used:.2f}")
        if self.group_sizes:
            lines.append("group_sizes\t" + ','.join(str(size) for size in self.group_sizes))
        lines.append(f"wall_time\t{self.wall_time:.3f}")
        return lines

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'iterations': self.iterations,
            'applied_moves': self.applied_moves,
            'final_total_mirkin': self.final_total_mirkin,
            'wall_time': self.wall_time,
            'workers': self.workers,
            'lambda_used': self.lambda_used,
            'group_sizes': self.group_sizes,
            'engine': self.engine,
            'converged': self.converged,
            'n': self.n,
            'k': self.k
        }

    def __repr__(self):
        return f'<RunReport {self.engine} iterations={self.iterations} total_mirkin={self.final_total_mirkin}>'

    @classmethod
    def from_result(cls, result, k, wall_time=0.0, workers=1, lambda_used=None, group_sizes=None):
        """Report for one ConsensusResult"""
        return cls(
            iterations=result.iterations,
            applied_moves=result.applied_moves,
            final_total_mirkin=result.final_total_mirkin,
            wall_time=wall_time,
            workers=workers,
            lambda_used=lambda_used,
            group_sizes=group_sizes,
            engine=result.engine,
            converged=result.converged,
            n=result.partition.n,
            k=k
        )
