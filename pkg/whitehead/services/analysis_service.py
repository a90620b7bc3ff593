"""
Analysis service: cache-first poset construction and report assembly.
"""
import logging
import time
from typing import List, Optional, Tuple

from whitehead.algebra.homology import convolve_counts, e1_dimensions, e1_homology
from whitehead.algebra.presentation import Presentation, presentation
from whitehead.algebra.ring import verify_phi
from whitehead.domain.graph import Graph, clique_counts, partial_conjugation_count, reduce_dominating
from whitehead.domain.poset import WhiteheadPoset, enumerate_poset, rank_table
from whitehead.models.responses import E1RowReport, GraphSummary, RankRow, Report, RingCensus
from whitehead.services.cache_service import CacheService, cache_service

logger = logging.getLogger(__name__)


class AnalysisService:
    """Builds posets and the numbers derived from them."""

    def __init__(self, cache: Optional[CacheService] = None):
        self.cache = cache if cache is not None else cache_service

    def summary(self, graph: Graph) -> GraphSummary:
        reduced = reduce_dominating(graph)
        return GraphSummary(
            n=graph.n,
            edges=graph.sorted_edges(),
            reduced_n=reduced.n,
            reduced_vertices=list(reduced.vertices),
            partial_conjugations=partial_conjugation_count(reduced),
        )

    def load_poset(
        self, graph: Graph, cap: Optional[int] = None, jobs: Optional[int] = None
    ) -> Tuple[WhiteheadPoset, bool]:
        """
        Poset of the reduced graph, from the cache when possible.

        Args:
            graph: Input graph (reduced here)
            cap: Element cap for enumeration
            jobs: Worker processes

        Returns:
            (poset, whether it came from the cache)
        """
        reduced = reduce_dominating(graph)
        cached = self.cache.get_poset(reduced)
        if cached is not None:
            return cached, True

        start_time = time.time()
        poset = enumerate_poset(reduced, cap=cap, jobs=jobs)
        elapsed = (time.time() - start_time) * 1000
        logger.info("Built poset with %d elements in %.1f ms", len(poset), elapsed)

        self.cache.set_poset(reduced, poset)
        return poset, False

    def report(
        self,
        graph: Graph,
        cap: Optional[int] = None,
        jobs: Optional[int] = None,
        include_ring: bool = False,
    ) -> Report:
        """
        Full report: poset census, Betti vectors, E¹ dimensions and optionally the ring census.

        Raises:
            ResourceCapError: If enumeration exceeds cap
        """
        poset, cached = self.load_poset(graph, cap=cap, jobs=jobs)
        rows = [RankRow(rank=r, types=t, essential=e) for r, t, e in rank_table(poset)]
        k_vector = [row.essential for row in rows]
        n_vector = clique_counts(poset.graph)
        return Report(
            graph=self.summary(graph),
            rank_histogram=poset.rank_histogram,
            rank_table=rows,
            chain_counts=poset.chain_counts(),
            k_vector=k_vector,
            n_vector=n_vector,
            betti_psout=k_vector,
            betti_psaut=convolve_counts(k_vector, n_vector),
            e1_dimensions=e1_dimensions(poset),
            ring=self._ring(poset, k_vector, n_vector, jobs) if include_ring else None,
            cached=cached,
        )

    def e1(
        self,
        graph: Graph,
        with_homology: bool = False,
        cap: Optional[int] = None,
        jobs: Optional[int] = None,
    ) -> Tuple[List[List[int]], List[E1RowReport]]:
        """E¹ dimension table and, on request, the homology of every row."""
        poset, _ = self.load_poset(graph, cap=cap, jobs=jobs)
        table = e1_dimensions(poset)
        if not with_homology:
            return table, []
        k_vector = [essential for _, _, essential in rank_table(poset)]
        return table, e1_homology(poset, k_vector, jobs=jobs)

    def ring(self, graph: Graph, cap: Optional[int] = None, jobs: Optional[int] = None) -> RingCensus:
        poset, _ = self.load_poset(graph, cap=cap, jobs=jobs)
        k_vector = [essential for _, _, essential in rank_table(poset)]
        return self._ring(poset, k_vector, clique_counts(poset.graph), jobs)

    def _ring(
        self, poset: WhiteheadPoset, k_vector: List[int], n_vector: List[int], jobs: Optional[int]
    ) -> RingCensus:
        psaut = convolve_counts(k_vector, n_vector)
        report = verify_phi(poset.graph, poset, jobs=jobs)
        return RingCensus(
            b1_size=report.b1_size,
            b2_size=report.b2_size,
            expected=psaut[2] if len(psaut) > 2 else 0,
            phi=report,
        )

    def presentation(self, graph: Graph) -> Presentation:
        return presentation(reduce_dominating(graph))


# Global analysis service instance
analysis_service = AnalysisService()
