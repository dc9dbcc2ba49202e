#pragma once

// Registry of the exact polynomial identities behind the C2/C3 cyclicity
// criteria, each replayed with exact rational arithmetic and reported
// pass/fail. "Verified" means a literally zero remainder, never a small one.
//
// Long printed source polynomials are treated as claims to check against an
// independently derived form. When a printed form is defective, the checker
// derives the correct polynomial, stores it in the record, and reports
// status `corrected` rather than silently fixing anything.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclicquad/multipoly.hpp"

namespace cyclicquad::identities {

enum class Status { verified, corrected, failed };
std::string to_string(Status s);

struct IdentityRecord {
    std::string id;
    std::string suite;  // core | resultants | boundary | appendix
    std::string description;
    Status status = Status::failed;
    // Single undetermined nonzero rational in "lhs == constant * product";
    // 1 when the identity has no scale freedom.
    Rational constant = Rational(1);
    std::vector<std::pair<std::string, std::string>> details;  // ordered notes
    std::string witness;  // failure remainder / mismatch description
    double seconds = 0.0;
};

struct LedgerReport {
    std::vector<IdentityRecord> records;
    int verified = 0;
    int corrected = 0;
    int failed = 0;
    double seconds = 0.0;
};

// Deterministic registry order.
const std::vector<std::string>& registry_ids();
bool has_identity(const std::string& id);
bool has_suite(const std::string& suite);

IdentityRecord verify(const std::string& id);  // throws std::out_of_range on unknown id
LedgerReport verify_all(const std::string& suite = "all");

// JSON form of the ledger (stable key order).
std::string ledger_to_json(const LedgerReport& report, int indent = 2);

// det(Cayley-Menger) == ratio * (explicit quadrilateral-equation polynomial);
// pinned exactly by I-CM-EXPANSION.
Rational cm_to_quad_equation_ratio();

// Shared exact polynomials, exposed for tests and for the numeric module's
// series checks (one definition for everything downstream).
const MultiPoly& cofactor_T();   // degree-6 cofactor of the full rationalization
const MultiPoly& healed_P3();    // first-order folding coefficient (degree 3)
const MultiPoly& healed_P7();    // first-order folding coefficient of F_z (degree 5)

// Exact first truncations along the isosceles-trapezoid degeneration
// (y = x+v, z = u-s, t -> 1), derived symbolically from cofactor_T:
//   truncation of T   in (v,s)      at t=1
//   truncation of T_z in (v,s,w)    at t=1, u=x-w
const MultiPoly& trapezoid_truncation_T();
const MultiPoly& trapezoid_truncation_Tz();

}  // namespace cyclicquad::identities
