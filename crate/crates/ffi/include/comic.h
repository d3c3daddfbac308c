#ifndef COMIC_H
#define COMIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which side the seeds are chosen for.
 */
typedef enum ComicProblem {
  /**
   * A-seeds maximizing A's spread given fixed B-seeds.
   */
  COMIC_PROBLEM_SELF_INF_MAX = 0,
  /**
   * B-seeds maximizing the boost to A's spread given fixed A-seeds.
   */
  COMIC_PROBLEM_COMP_INF_MAX = 1,
} ComicProblem;

typedef enum ComicStatus {
  COMIC_STATUS_OK = 0,
  COMIC_STATUS_NULL_POINTER = 1,
  COMIC_STATUS_INVALID_ARGUMENT = 2,
  COMIC_STATUS_IO = 3,
  COMIC_STATUS_PARSE = 4,
  COMIC_STATUS_UNWEIGHTED = 5,
  COMIC_STATUS_REGIME = 6,
  COMIC_STATUS_BUDGET = 7,
  COMIC_STATUS_BUFFER_TOO_SMALL = 8,
  COMIC_STATUS_PANIC = 9,
} ComicStatus;

/**
 * Opaque directed graph with edge probabilities.
 */
typedef struct ComicGraph ComicGraph;

typedef struct ComicTimParams {
  size_t k;
  double epsilon;
  double ell;
  /**
   * Number of RR-sets; 0 derives it from the bound.
   */
  uint64_t theta;
  /**
   * Keep the fixed seeds out of the candidates.
   */
  bool exclude_fixed;
} ComicTimParams;

/**
 * Global adoption probabilities.
 */
typedef struct ComicGaps {
  double q_a0;
  double q_ab;
  double q_b0;
  double q_ba;
} ComicGaps;

typedef struct ComicSpread {
  double sigma_a;
  double sigma_b;
  /**
   * Zero for exact values.
   */
  double stderr_a;
  double stderr_b;
} ComicSpread;

typedef struct ComicBoost {
  double boost;
  double stderr;
} ComicBoost;

/**
 * Work summary of one selection; `ept_*` are mean edges examined per RR-set.
 */
typedef struct ComicRrStats {
  uint64_t theta;
  double lb;
  double ept_f;
  double ept_b1;
  double ept_b2;
  double ept_bs;
  double ept_bo;
  double wall_time_ms;
} ComicRrStats;

typedef struct ComicGapEstimate {
  /**
   * False when the denominator is empty; the other fields are then zero.
   */
  bool defined;
  double est;
  uint64_t n;
  /**
   * 95% interval.
   */
  double lo;
  double hi;
} ComicGapEstimate;

typedef struct ComicLearnedGaps {
  struct ComicGapEstimate q_a0;
  struct ComicGapEstimate q_ab;
  struct ComicGapEstimate q_b0;
  struct ComicGapEstimate q_ba;
} ComicLearnedGaps;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *comic_last_error(void);

struct ComicTimParams comic_default_tim_params(void);

/**
 * Loads a whitespace-separated edge list (`u v [p]` per line). Unweighted graphs get
 * weighted-cascade probabilities `1 / in-degree`.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum ComicStatus comic_graph_load(const char *path,
                                  bool undirected,
                                  bool remap,
                                  struct ComicGraph **out);

/**
 * Builds a graph on nodes `0..n` from `m` edges `src[i] -> dst[i]`. With `prob` null the
 * edges get weighted-cascade probabilities.
 *
 * # Safety
 * `src` and `dst` (and `prob` unless null) must point to `m` elements.
 */
enum ComicStatus comic_graph_from_edges(size_t n,
                                        const uint32_t *src,
                                        const uint32_t *dst,
                                        const double *prob,
                                        size_t m,
                                        struct ComicGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards. Null is ignored.
 */
void comic_graph_free(struct ComicGraph *g);

/**
 * Number of nodes, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t comic_graph_node_count(const struct ComicGraph *g);

/**
 * Number of edges, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t comic_graph_edge_count(const struct ComicGraph *g);

/**
 * Monte Carlo estimate of both spreads. Depends only on `seed`, not on threads.
 *
 * # Safety
 * Seed arrays must hold the given number of elements; pointers must be valid.
 */
enum ComicStatus comic_estimate_spread(const struct ComicGraph *g,
                                       struct ComicGaps gaps,
                                       const uint32_t *seeds_a,
                                       size_t n_a,
                                       const uint32_t *seeds_b,
                                       size_t n_b,
                                       size_t iterations,
                                       uint64_t seed,
                                       struct ComicSpread *out);

/**
 * Monte Carlo estimate of the increase in A's spread caused by the B-seeds.
 *
 * # Safety
 * Seed arrays must hold the given number of elements; pointers must be valid.
 */
enum ComicStatus comic_estimate_boost(const struct ComicGraph *g,
                                      struct ComicGaps gaps,
                                      const uint32_t *seeds_a,
                                      size_t n_a,
                                      const uint32_t *seeds_b,
                                      size_t n_b,
                                      size_t iterations,
                                      uint64_t seed,
                                      struct ComicBoost *out);

/**
 * Exact spreads by enumeration; refuses graphs above 12 nodes or 20 edges with
 * `COMIC_STATUS_BUDGET`.
 *
 * # Safety
 * Seed arrays must hold the given number of elements; pointers must be valid.
 */
enum ComicStatus comic_exact_spread(const struct ComicGraph *g,
                                    struct ComicGaps gaps,
                                    const uint32_t *seeds_a,
                                    size_t n_a,
                                    const uint32_t *seeds_b,
                                    size_t n_b,
                                    struct ComicSpread *out);

/**
 * RR-set seed selection. Needs GAPs under which the objective is submodular, otherwise
 * returns `COMIC_STATUS_REGIME`; use `comic_sandwich` then. Writes the seeds to `out_seeds`
 * and their count to `out_len` (also on `COMIC_STATUS_BUFFER_TOO_SMALL`). `stats` may be
 * null.
 *
 * # Safety
 * `fixed` must hold `n_fixed` elements and `out_seeds` `capacity` elements.
 */
enum ComicStatus comic_select_seeds(const struct ComicGraph *g,
                                    struct ComicGaps gaps,
                                    enum ComicProblem problem_kind,
                                    const uint32_t *fixed,
                                    size_t n_fixed,
                                    const struct ComicTimParams *params,
                                    uint64_t seed,
                                    uint32_t *out_seeds,
                                    size_t capacity,
                                    size_t *out_len,
                                    struct ComicRrStats *stats);

/**
 * Seed selection for any complementary GAPs: the best of the upper-bound, lower-bound and
 * greedy candidates, each scored with `eval_iterations` simulations. `ratio_upper` (may be
 * null) receives the estimated objective-to-upper-bound ratio of the upper-bound solution.
 *
 * # Safety
 * `fixed` must hold `n_fixed` elements and `out_seeds` `capacity` elements.
 */
enum ComicStatus comic_sandwich(const struct ComicGraph *g,
                                struct ComicGaps gaps,
                                enum ComicProblem problem_kind,
                                const uint32_t *fixed,
                                size_t n_fixed,
                                const struct ComicTimParams *params,
                                size_t eval_iterations,
                                uint64_t seed,
                                uint32_t *out_seeds,
                                size_t capacity,
                                size_t *out_len,
                                double *ratio_upper);

/**
 * Learns the four GAPs of `item_a` and `item_b` from a tab-separated action log
 * (`user item action time`, action `inform` or `rate`).
 *
 * # Safety
 * The strings must be nul-terminated and `out` valid.
 */
enum ComicStatus comic_learn_gaps(const char *log_path,
                                  const char *item_a,
                                  const char *item_b,
                                  struct ComicLearnedGaps *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMIC_H */
