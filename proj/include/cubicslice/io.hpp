#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicslice/angle.hpp"
#include "cubicslice/lamination.hpp"
#include "cubicslice/ray_trace.hpp"
#include "cubicslice/slice.hpp"
#include "cubicslice/tessellation.hpp"

namespace cubicslice {

using Json = nlohmann::ordered_json;

// Fractions are serialized exactly as "p/q" strings.
Json to_json(const Angle& t);
Angle angle_from_json(const Json& j);
Json to_json(const AngleSet& s);
Json to_json(const std::vector<Angle>& v);
Json to_json(std::complex<double> z);  // [re, im]

Json to_json(const Leaf& l);  // [a, b]
Json to_json(const std::vector<Leaf>& leaves);
Json to_json(const Lamination& lam);
Lamination lamination_from_json(const Json& j);

Json to_json(const AnglePartition& p);  // list of classes
AnglePartition partition_from_json(const Json& j);

Json to_json(const RayTrace& tr, bool samples = true);
Json to_json(const OrbitPortraitResult& r);
Json to_json(const SlicePoint& p);
SlicePoint slice_point_from_json(const Json& j);
Json to_json(const ParamRayTrace& tr, bool samples = true);
Json to_json(const Pairing& p);
Json to_json(const Tessellation& t);

// One row per ray: numerator, denominator, status, landing kind, a, v.
void write_landings_csv(std::ostream& os, const std::vector<ParamRayTrace>& traces);

// Writes to stdout for "-" or an empty path; throws std::runtime_error on I/O failure.
void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const Json& j);

}  // namespace cubicslice
