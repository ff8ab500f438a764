#pragma once
#include <cstdint>
#include <string>

#include "graded.hpp"
#include "koszul.hpp"

namespace kpk {

/// Certificate for the lifted base ring B = Z/p^k[X_1..X_n] acting on M
/// through the given sequence. The three checks mirror the requirements on
/// the lift: the variables map onto the actions, M is finite over B, and the
/// variables form a regular sequence and system of parameters on B. The
/// constant p^k annihilates M and stays nonzero at the base (valuation k), so
/// it is a valid choice of the cut-out element; its valuation is recorded.
struct LiftCertificate {
    CoeffRing ring;
    std::uint32_t n = 0;
    std::uint32_t delta_valuation = 0; // = k
    bool delta_annihilates = false;    // p^k * M = 0
    bool delta_off_axes = false;       // p^k is a nonzero constant, not in (X)
    bool variables_match_actions = false; // check (1)
    bool finite_over_base = false;        // check (2)
    bool regular_sop = false;             // check (3)
    std::uint64_t coinvariant_length = 0; // lambda(B/(y)), must equal k
    int regularity_degree_bound = 0;

    bool pass() const {
        return delta_annihilates && delta_off_axes && variables_match_actions &&
               finite_over_base && regular_sop;
    }
};

/// Builds the certificate for a finite-length system; always succeeds in this
/// model, with every check executed rather than assumed.
LiftCertificate construct_lift(const ActionSystem& sys, int degree_bound = -1,
                               Exec exec = Exec::parallel);

/// The homology transport: the profile computed by the action pipeline must
/// match the profile computed by the graded backend's block assembler running
/// on the same matrices. A mismatch is an implementation bug and the verdict
/// carries both profiles.
struct BaseChangeVerdict {
    bool pass = false;
    EulerProfile action_pipeline;
    EulerProfile graded_pipeline;
    std::string detail;
};

BaseChangeVerdict verify_base_change(const ActionSystem& sys, const LiftCertificate& cert,
                                     Exec exec = Exec::parallel);

} // namespace kpk
