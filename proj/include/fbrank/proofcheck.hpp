#pragma once

// Machine-checkable replay of the rank proof. Each check has a stable id,
// runs for one dimension n, and returns a verdict backed by serialized
// operators. Checks are independent and may run concurrently.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace fbrank {

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);

// Deliberate defects used as negative controls.
enum class Mutation {
  None,
  DropD2,      // remove D_2 from the claimed diagonal basis
  FlipSign,    // flip the sign of one term of C_12 (or of a claimed identity)
  WrongOrder,  // plain graded lex instead of the stated block order
};

std::string to_string(Mutation m);
Mutation parse_mutation(const std::string& s);  // none | drop-d2 | flip-sign | wrong-order

struct CheckOptions {
  std::uint64_t seed = 0;
  // Reduction steps per check; exhaustion gives status Skipped.
  std::uint64_t budget = 0;  // 0 = StepBudget::default_limit()
  Mutation mutation = Mutation::None;
};

struct CheckResult {
  std::string id;
  int n = 0;
  CheckStatus status = CheckStatus::Pass;
  double wall_time = 0;
  // Backing evidence; on failure the first entries hold the nonzero
  // difference or remainder.
  std::vector<nlohmann::json> witnesses;
  // Printed formulas that disagree with the computed value. An entry with
  // "exempt": false is a literal identity that does not hold; the verdict
  // then rests on the corrected identity and the membership it implies.
  std::vector<nlohmann::json> discrepancies;
  std::size_t identities = 0;  // exact equalities tested

  nlohmann::json to_json() const;
};

struct CheckInfo {
  std::string id;
  std::string statement;
  int min_n = 1;
  int max_n = 4;  // largest n in the default sweep
  Mutation control;  // mutation that must make the check fail
};

// Coverage table of the replay, in canonical (sorted) order.
const std::vector<CheckInfo>& check_catalog();
const CheckInfo& check_info(const std::string& id);

// Throws std::invalid_argument for an unknown id or n below min_n.
CheckResult run_check(const std::string& id, int n, const CheckOptions& options = {});

// Every catalogued check with min_n <= n, sorted by id. jobs > 1 runs
// checks concurrently; the result does not depend on scheduling.
std::vector<CheckResult> run_all(int n, const CheckOptions& options = {}, unsigned jobs = 1);

nlohmann::json ledger_json(const std::vector<CheckResult>& results);

}  // namespace fbrank
