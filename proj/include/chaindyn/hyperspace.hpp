#ifndef CHAINDYN_HYPERSPACE_HPP
#define CHAINDYN_HYPERSPACE_HPP

#include "chaindyn/chains.hpp"
#include "chaindyn/system.hpp"

#include <vector>

namespace chaindyn {

/// Non-empty subset of carrier indices in canonical (ascending, distinct) form.
using FiniteSubset = std::vector<Index>;

/// Subsets of {0..N-1} with 1..n elements in graded-lexicographic order.
/// Throws InvalidParameter unless 1 <= n <= N, BudgetExceeded past the cap.
std::vector<FiniteSubset> enumerate_Fn(std::size_t carrier_size, std::size_t n, const Budget& budget = {});

/// sum_{k=1..n} C(N, k), saturating at SIZE_MAX.
std::size_t count_Fn(std::size_t carrier_size, std::size_t n);

/// A subset to id lookup for the graded-lex enumeration.
class SubsetIndexer {
public:
    SubsetIndexer(std::size_t carrier_size, std::size_t n);
    Index id_of(const FiniteSubset& subset) const;

private:
    std::size_t binom(std::size_t a, std::size_t b) const;

    std::size_t n_;
    std::size_t k_max_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> offset_;
};

/// A ⊂ E[A'] and A' ⊂ E[A]. Throws NonSymmetricEntourage.
bool hyper_entourage_related(const FiniteSubset& a, const FiniteSubset& b, const Entourage& e);

/// The induced system f_n on F_n(X) (2^X when n = N).
class HyperSystem {
public:
    HyperSystem(MapSystem base, std::size_t n, const Budget& budget = {});

    const MapSystem& base() const noexcept { return base_; }
    std::size_t order() const noexcept { return n_; }
    std::size_t size() const noexcept { return subsets_.size(); }
    const std::vector<FiniteSubset>& subsets() const noexcept { return subsets_; }
    const FiniteSubset& subset(Index id) const { return subsets_.at(id); }
    Index id_of(const FiniteSubset& subset) const { return indexer_.id_of(subset); }

    /// f(A) for table systems.
    FiniteSubset image(Index id) const;

    /// Table base only: f_n as a table system over a discrete subset carrier.
    MapSystem as_table_system() const;

private:
    MapSystem base_;
    std::size_t n_;
    std::vector<FiniteSubset> subsets_;
    SubsetIndexer indexer_;
};

/// Edge A -> A' iff (f(A), A') in 2^E. Builtin bases compare unsnapped
/// ambient images against carrier cross-sections.
TransitionGraph build_hyper_transition_graph(const HyperSystem& hs, const Entourage& e, const Budget& budget = {});

/// Walks a certified hyper chain A_0..A_k with x in A_0, y in A_k down to a base
/// chain x -> y of the same length, picking the smallest admissible index at
/// each step. Throws SelectionFailed if no such selection exists.
Chain select_base_chain_from_hyper_chain(const HyperSystem& hs, const Chain& hyper_chain,
                                         const TransitionGraph& base_graph, Index x, Index y);

/// h((x_1..x_n)) = {x_1..x_n}, as a factor map from the tabulated product to
/// the tabulated hyperspace. Table bases only.
FactorMap tuple_to_set_factor(const ProductSystem& product, const HyperSystem& hyper);

/// Components of the symmetric relation E on the carrier, each ascending,
/// ordered by smallest member.
std::vector<std::vector<Index>> epsilon_components(const Entourage& e);

} // namespace chaindyn

#endif
