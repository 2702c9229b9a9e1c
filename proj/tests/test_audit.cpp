#include <catch_amalgamated.hpp>

#include <set>

#include "quasiherm/audit.hpp"

using namespace quasiherm;

namespace {
RunConfig config(double alpha, double z) {
  RunConfig c;
  c.model = {3.0, alpha};
  c.z = z;
  return c;
}
}  // namespace

TEST_CASE("equation id list is pinned") {
  const auto ids = audit_equation_ids();
  REQUIRE(ids.size() == 55);
  CHECK(ids.front() == "Eq1");
  CHECK(ids[16] == "Eq17");
  CHECK(ids.back() == "Eq55");
}

TEST_CASE("report has exactly one entry per id, in order") {
  const AuditReport rep = run_audit(config(1.0, 1.0));
  const auto ids = audit_equation_ids();
  REQUIRE(rep.entries.size() == ids.size());
  std::set<std::string> seen;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    CHECK(rep.entries[k].equation_id == ids[k]);
    seen.insert(rep.entries[k].equation_id);
  }
  CHECK(seen.size() == ids.size());
}

TEST_CASE("status is pass exactly when residual is below threshold") {
  for (const AuditEntry& e : run_audit(config(1.0, 1.0)).entries) {
    if (!e.threshold) {
      CHECK(e.status != AuditStatus::pass);
      continue;
    }
    const bool below = std::isfinite(e.residual) && e.residual < *e.threshold;
    CHECK((e.status == AuditStatus::pass) == below);
  }
}

TEST_CASE("gated entries all pass at the reference point") {
  for (const AuditEntry& e : run_audit(config(1.0, 1.0)).entries) {
    INFO(e.equation_id << " " << e.description);
    if (e.threshold) CHECK(e.status == AuditStatus::pass);
  }
}

TEST_CASE("report is byte-deterministic") {
  const RunConfig c = config(1.0, 2.0);
  CHECK(run_audit(c).to_json() == run_audit(c).to_json());
  CHECK(run_audit(c).to_csv() == run_audit(c).to_csv());
}

TEST_CASE("infeasible metric becomes a flag entry") {
  const AuditReport rep = run_audit(config(2.0, 1.0));
  const AuditEntry* e = rep.find("Eq17");
  REQUIRE(e);
  CHECK(e->status == AuditStatus::flag);
  CHECK(e->description.find("no-real-metric") != std::string::npos);
  CHECK_FALSE(std::isfinite(e->residual));
  CHECK(rep.to_json().find("\"residual\": null") != std::string::npos);
}

TEST_CASE("alpha = 0 gives a trivial metric") {
  const AuditReport rep = run_audit(config(0.0, 0.5));
  for (const char* id : {"Eq1", "Eq2", "Eq3", "Eq8", "Eq9", "Eq10", "Eq17"}) {
    const AuditEntry* e = rep.find(id);
    REQUIRE(e);
    CHECK(e->status == AuditStatus::pass);
    CHECK(e->residual < 1e-14);
  }
}

TEST_CASE("printed-formula deltas are reported, not gated") {
  const AuditReport rep = run_audit(config(1.0, 1.0));
  for (const char* id : {"Eq13", "Eq14", "Eq18", "Eq22", "Eq23", "Eq24", "Eq25", "Eq26", "Eq27", "Eq28"}) {
    const AuditEntry* e = rep.find(id);
    REQUIRE(e);
    CHECK_FALSE(e->threshold);
    CHECK(e->status == AuditStatus::info);
  }
}

TEST_CASE("invalid configuration throws") {
  RunConfig c = config(1.0, 1.0);
  c.model.omega = -1.0;
  CHECK_THROWS_AS(run_audit(c), Error);
  c = config(1.0, 1.0);
  c.n = -2;
  CHECK_THROWS_AS(run_audit(c), Error);
}

TEST_CASE("JSON formatting uses 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("CSV table checks shape") {
  CsvTable t{{"k=v"}, {"x", "y"}, {{1.0, 2.0}, {3.0, 4.0}}};
  CHECK(t.str() == "# k=v\nx,y\n1,3\n2,4\n");
  CsvTable bad{{}, {"x"}, {{1.0}, {2.0}}};
  CHECK_THROWS_AS(bad.str(), Error);
}
