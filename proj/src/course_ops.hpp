#pragma once
// Internal machinery shared by the handle-insertion engine and the
// cut-system stages: offset chains along a recorded course and gap detours.
#include "trisect/cutsystem.hpp"

namespace trisect::detail {

struct CoursePos {
    std::size_t piece = 0;
    Rat t;
};

struct OffsetChain {
    std::vector<QPt> pts;
    std::vector<Conn> conns; // pts.size()-1 of them
};

OffsetChain offset_subpath(const TubedSurface& s, const PLPath& course, CoursePos from,
                           CoursePos to, const Rat& h0, const Rat& slot);

struct CutEvent {
    std::size_t piece = 0;
    Rat t;
    QPt point;
    int line = 0;
    std::size_t chain_seg = 0;
};

std::vector<CutEvent> collect_cuts(const PLPath& path, const OffsetChain& chain, int line_id);

struct Detour {
    CutEvent in, out;
    std::vector<QPt> pts;
    std::vector<Conn> conns;
};

PLPath splice_detours(const PLPath& path, std::vector<Detour> detours);

void append_chain_from(const OffsetChain& chain, std::size_t seg, const QPt& from,
                       std::vector<QPt>& pts, std::vector<Conn>& conns);
void append_chain_reversed_to(const OffsetChain& chain, std::size_t stop_seg,
                              const QPt& stop_pt, std::vector<QPt>& pts,
                              std::vector<Conn>& conns);

/// All gap detours for crossings of `path` with the corridor of one
/// recorded tube: cuts the path at +/- lane offsets of the course and
/// routes each crossing through a column across the red curve. Lanes,
/// in-zone laterals and column positions are monotone functions of the
/// crossing's forward position along the course, so routes never collide
/// across calls. Returns the number of detours made.
long reroute_through_gap(const TubedSurface& s, const TubeTrace& tt, PLPath& path,
                         Rat& slot_state);

} // namespace trisect::detail
