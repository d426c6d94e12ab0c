#include "aol/learners.hpp"

namespace aol {

MajorityClass::MajorityClass(StreamSchema schema) : Learner(std::move(schema)) {
  counts_.assign(this->schema().n_classes(), 0.0);
}

LearnerPtr MajorityClass::fresh(std::uint64_t) const { return std::make_unique<MajorityClass>(schema()); }

void MajorityClass::do_fit(std::span<const Instance> batch) {
  counts_.assign(schema().n_classes(), 0.0);
  for (const Instance& x : batch) do_update(x);
}

void MajorityClass::do_update(const Instance& x) { counts_[static_cast<std::size_t>(*x.label)] += 1.0; }

std::vector<double> MajorityClass::do_proba(std::span<const double>) const { return counts_; }

}  // namespace aol
