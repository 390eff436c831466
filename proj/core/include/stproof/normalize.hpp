// Segment and track analysis of MQST derivations and the normalization
// rewrite loop: permutation steps, detour contractions, and the removal of
// compound GID instances and vacuous sidetrack applications.

#pragma once

#include "stproof/transform.hpp"

namespace stp {

// A node position: child indices from the root.
using NodePath = std::vector<int>;

// A maximal chain of sequent occurrences linked by contraction steps and
// sidetrack minor-premise steps, listed topmost first.
struct Segment {
  std::vector<NodePath> nodes;
  int rank = 0;                     // logical symbols in the first sequent
  bool starts_with_intro = false;   // first occurrence concludes an introduction
  bool starts_with_gid = false;     // first occurrence is a GID instance
  bool ends_at_major_elim = false;  // last occurrence feeds an elimination
};

// Number of connective and quantifier occurrences.
int count_logical_symbols(const FormulaPtr& f);
int count_logical_symbols(const Sequent& s);

// Partition of all sequent occurrences of an MQST derivation into segments,
// ordered by the preorder position of their first node.
std::vector<Segment> segments(const DerivPtr& d);

// The segments that start at an introduction conclusion or a GID instance
// and end at the (major) premise of an elimination.
std::vector<Segment> cut_segments(const DerivPtr& d);

// True iff d has no cut segments, every sidetrack application discharges at
// least one assumption, and every GID instance is atomic.
bool is_normal(const DerivPtr& d);

// Rewrites d into a normal derivation with the same conclusion; open
// premises of the result form a subset of the input's (detour contractions
// may drop or duplicate subderivations). Appends one line per rewrite to
// *trace when given. The (max cut rank, total max-rank segment length)
// measure strictly decreases at every step and is asserted at runtime.
// Normal inputs are returned unchanged.
DerivPtr normalize(const DerivPtr& d, std::vector<std::string>* trace = nullptr);

// A root-reaching chain of occurrences: starts at a GID instance or an
// undischarged top assumption, descends through conclusions, and jumps from
// the major premise of a sidetrack application to one of its discharged
// assumptions. segment_starts indexes the first occurrence of each segment
// along the track; midsegment indexes into segment_starts.
struct Track {
  std::vector<NodePath> nodes;
  std::vector<int> segment_starts;
  int midsegment = 0;
};

// All tracks of a normal derivation. Throws TransformError otherwise.
std::vector<Track> tracks(const DerivPtr& d);

// The unique root-to-leaf path through premises of introductions, major
// premises of eliminations, and contraction premises, for a normal
// derivation ending in an elimination; returned root first. The terminal
// node is an undischarged assumption. Throws TransformError when the
// preconditions fail.
std::vector<NodePath> main_branch(const DerivPtr& d);

}  // namespace stp
