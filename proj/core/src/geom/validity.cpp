#include "cadseq/geom/validity.hpp"

#include "cadseq/errors.hpp"
#include "cadseq/geom/intersect.hpp"
#include "cadseq/geom/sampling.hpp"
#include "cadseq/geom/solid.hpp"

namespace cadseq::geom {

ValidityReport is_valid(const CadProgram& p) {
  ValidityReport report;
  SolidModel model;
  try {
    model = compile(p);
  } catch (const Error& e) {
    report.failure_detail = std::string("compile: ") + e.what();
    return report;
  }
  report.compiles = true;

  report.self_intersection_free = true;
  for (const ExtrudedSolid& solid : model.solids) {
    if (check_self_intersection(solid.profile)) {
      report.self_intersection_free = false;
      report.failure_detail = "profile self-intersection";
      break;
    }
  }

  try {
    sample_surface(model, kValiditySampleCount, kValiditySeed);
    report.samplable = true;
  } catch (const SamplingError& e) {
    report.samplable = false;
    if (report.failure_detail.empty()) {
      report.failure_detail = std::string("sampling: ") + e.what();
    }
  }
  return report;
}

}  // namespace cadseq::geom
