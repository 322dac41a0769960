#include "kleinfreq.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "klein/catalog.hpp"
#include "klein/moebius1d.hpp"
#include "klein/moebius2d.hpp"
#include "klein/sail1d.hpp"

struct kf_face {
    klein::LatticeFace face;
};

struct kf_gk_sample {
    klein::GaussKuzminSample sample;
};

namespace {

thread_local std::string last_error;

kf_status status_of(klein::ErrorKind kind) {
    using klein::ErrorKind;
    switch (kind) {
        case ErrorKind::invalid_argument: return KF_ERR_INVALID_ARGUMENT;
        case ErrorKind::invalid_face: return KF_ERR_INVALID_FACE;
        case ErrorKind::invalid_map: return KF_ERR_INVALID_MAP;
        case ErrorKind::degenerate: return KF_ERR_DEGENERATE;
        case ErrorKind::out_of_range: return KF_ERR_OUT_OF_RANGE;
        case ErrorKind::singular: return KF_ERR_SINGULAR;
        case ErrorKind::unbounded_region: return KF_ERR_UNBOUNDED;
        case ErrorKind::insufficient_depth: return KF_ERR_INSUFFICIENT_DEPTH;
        case ErrorKind::unsupported: return KF_ERR_UNSUPPORTED;
        case ErrorKind::budget_exceeded: return KF_ERR_BUDGET;
        case ErrorKind::no_samples: return KF_ERR_NO_SAMPLES;
        case ErrorKind::parse_error: return KF_ERR_PARSE;
    }
    return KF_ERR_INTERNAL;
}

kf_status fail(kf_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <class F>
kf_status guard(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const klein::FaceError& e) {
        return fail(KF_ERR_INVALID_FACE, e.what());
    } catch (const klein::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(KF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(KF_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(KF_ERR_INTERNAL, "unknown error");
    }
}

kf_status null_argument() { return fail(KF_ERR_INVALID_ARGUMENT, "null argument"); }

kf_status write_string(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (!buffer || capacity < s.size() + 1)
        return fail(KF_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
    std::memcpy(buffer, s.c_str(), s.size() + 1);
    return KF_OK;
}

kf_status to_int64(const klein::Integer& v, int64_t* out) {
    if (!v.fits_slong_p()) return fail(KF_ERR_OUT_OF_RANGE, "value does not fit in 64 bits");
    *out = v.get_si();
    return KF_OK;
}

klein::Integer from_int64(int64_t v) { return klein::Integer(static_cast<long>(v)); }

klein::Rational parse_rational(const char* text) {
    if (!text) throw klein::Error(klein::ErrorKind::invalid_argument, "null rational");
    return klein::Rational::parse(text);
}

void fill(const klein::FrequencyResult& r, kf_frequency* out) {
    out->value = r.value;
    out->error = r.error;
    out->method = r.method == klein::FrequencyMethod::exact ? KF_METHOD_EXACT : KF_METHOD_MC;
    out->samples = r.samples;
    out->accepted = r.accepted;
    out->inconclusive = r.inconclusive;
    out->outside_support = r.outside_support;
    out->cells = r.cells;
    out->inconclusive_warning = r.samples > 0 && r.inconclusive * 100 > r.samples;
}

}  // namespace

extern "C" {

const char* kf_last_error(void) { return last_error.c_str(); }

const char* kf_status_string(kf_status status) {
    switch (status) {
        case KF_OK: return "ok";
        case KF_ERR_INVALID_ARGUMENT: return "invalid argument";
        case KF_ERR_INVALID_FACE: return "invalid face";
        case KF_ERR_INVALID_MAP: return "invalid map";
        case KF_ERR_DEGENERATE: return "degenerate";
        case KF_ERR_OUT_OF_RANGE: return "out of range";
        case KF_ERR_SINGULAR: return "singular";
        case KF_ERR_UNBOUNDED: return "unbounded region";
        case KF_ERR_INSUFFICIENT_DEPTH: return "insufficient depth";
        case KF_ERR_UNSUPPORTED: return "unsupported";
        case KF_ERR_BUDGET: return "budget exceeded";
        case KF_ERR_NO_SAMPLES: return "no samples";
        case KF_ERR_PARSE: return "parse error";
        case KF_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case KF_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

kf_status kf_face_create(const int64_t* xyz, size_t count, kf_face** out) {
    if (!xyz || !out) return null_argument();
    return guard([&] {
        std::vector<klein::IntVec3> vertices;
        for (size_t i = 0; i < count; ++i)
            vertices.push_back({from_int64(xyz[3 * i]), from_int64(xyz[3 * i + 1]), from_int64(xyz[3 * i + 2])});
        *out = new kf_face{klein::LatticeFace(std::move(vertices))};
        return KF_OK;
    });
}

kf_status kf_face_from_json(const char* json, kf_face** out) {
    if (!json || !out) return null_argument();
    return guard([&] {
        *out = new kf_face{klein::face_from_json(json)};
        return KF_OK;
    });
}

kf_status kf_face_from_catalog(const char* id, kf_face** out) {
    if (!id || !out) return null_argument();
    return guard([&] {
        const auto entry = klein::find_catalog_entry(id);
        if (!entry) return fail(KF_ERR_INVALID_ARGUMENT, std::string("unknown catalog id ") + id);
        *out = new kf_face{entry->face};
        return KF_OK;
    });
}

void kf_face_destroy(kf_face* face) { delete face; }

kf_status kf_face_integer_area(const kf_face* face, int64_t* out) {
    if (!face || !out) return null_argument();
    return guard([&] { return to_int64(face->face.integer_area(), out); });
}

kf_status kf_face_integer_distance(const kf_face* face, int64_t* out) {
    if (!face || !out) return null_argument();
    return guard([&] { return to_int64(klein::integer_distance(face->face), out); });
}

kf_status kf_face_vertex_count(const kf_face* face, size_t* out) {
    if (!face || !out) return null_argument();
    *out = face->face.size();
    return KF_OK;
}

kf_status kf_face_vertices(const kf_face* face, int64_t* xyz, size_t capacity) {
    if (!face || !xyz) return null_argument();
    if (capacity < 3 * face->face.size()) return fail(KF_ERR_BUFFER_TOO_SMALL, "vertex buffer too small");
    return guard([&] {
        size_t i = 0;
        for (const auto& v : face->face.vertices())
            for (const klein::Integer* c : {&v.x, &v.y, &v.z})
                if (const kf_status s = to_int64(*c, &xyz[i++]); s != KF_OK) return s;
        return KF_OK;
    });
}

kf_status kf_face_to_json(const kf_face* face, char* buffer, size_t capacity, size_t* needed) {
    if (!face) return null_argument();
    return guard([&] { return write_string(klein::face_to_json(face->face), buffer, capacity, needed); });
}

kf_status kf_face_apply_unimodular(const kf_face* face, const int64_t matrix[9], kf_face** out) {
    if (!face || !matrix || !out) return null_argument();
    return guard([&] {
        klein::UnimodularMap3::Entries m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] = from_int64(matrix[3 * i + j]);
        *out = new kf_face{klein::apply_unimodular(klein::UnimodularMap3(std::move(m)), face->face)};
        return KF_OK;
    });
}

kf_status kf_catalog_ids(char* buffer, size_t capacity, size_t* needed) {
    return guard([&] {
        std::string ids;
        for (const auto& e : klein::face_catalog()) ids += (ids.empty() ? "" : ",") + e.id;
        return write_string(ids, buffer, capacity, needed);
    });
}

kf_status kf_catalog_verify(size_t* mismatches) {
    if (!mismatches) return null_argument();
    return guard([&] {
        const auto bad = klein::verify_catalog();
        *mismatches = bad.size();
        if (!bad.empty()) last_error = "catalog mismatch: " + bad.front();
        return KF_OK;
    });
}

kf_status kf_cf_expand(const char* alpha, kf_parity parity, char* buffer, size_t capacity, size_t* needed) {
    return guard([&] {
        klein::Parity p = klein::Parity::shortest;
        if (parity == KF_PARITY_EVEN)
            p = klein::Parity::even;
        else if (parity == KF_PARITY_ODD)
            p = klein::Parity::odd;
        else if (parity != KF_PARITY_SHORTEST)
            return fail(KF_ERR_INVALID_ARGUMENT, "unknown parity");
        return write_string(klein::cf_expand(parse_rational(alpha), p).str(), buffer, capacity, needed);
    });
}

kf_status kf_sail_vertices(const char* alpha, char* buffer, size_t capacity, size_t* needed) {
    return guard([&] {
        const auto sail = klein::sail_vertices(parse_rational(alpha));
        std::string s;
        for (const auto& v : sail.vertices) s += (s.empty() ? "" : " ") + klein::to_string(v);
        return write_string(s, buffer, capacity, needed);
    });
}

kf_status kf_sail_cf(const char* alpha, char* buffer, size_t capacity, size_t* needed) {
    return guard([&] {
        const auto sail = klein::sail_vertices(parse_rational(alpha));
        return write_string(klein::sail_to_cf(sail).str(), buffer, capacity, needed);
    });
}

kf_status kf_cf_value(const char* elements, char* buffer, size_t capacity, size_t* needed) {
    if (!elements) return null_argument();
    return guard([&] {
        std::string text(elements);
        for (char& c : text)
            if (c == '[' || c == ']' || c == ',' || c == ';') c = ' ';
        std::istringstream in(text);
        std::vector<klein::Integer> values;
        for (std::string token; in >> token;) values.push_back(klein::Rational::parse(token).numerator());
        const klein::ContinuedFraction cf(std::move(values));
        return write_string(klein::cf_value(cf).str(), buffer, capacity, needed);
    });
}

kf_status kf_freq1d_exact(int64_t k, double* out) {
    if (!out) return null_argument();
    return guard([&] {
        *out = klein::freq_1d_exact(k);
        return KF_OK;
    });
}

kf_status kf_freq1d_numeric(int64_t k, double tolerance, kf_estimate* out) {
    if (!out) return null_argument();
    return guard([&] {
        try {
            const auto est = klein::freq_1d_numeric(k, tolerance);
            *out = {est.value, est.abs_error, est.samples_or_cells};
            return KF_OK;
        } catch (const klein::BudgetExceeded& e) {
            *out = {e.best_value(), e.best_error(), 0};
            return fail(KF_ERR_BUDGET, e.what());
        }
    });
}

kf_status kf_freq1d_partial_sum(int64_t k_max, double* out) {
    if (!out) return null_argument();
    return guard([&] {
        *out = klein::freq_1d_partial_sum(k_max);
        return KF_OK;
    });
}

kf_status kf_gk_frequency(int64_t k, double* out) {
    if (!out) return null_argument();
    return guard([&] {
        *out = klein::gk_frequency(k);
        return KF_OK;
    });
}

kf_status kf_total_mass(double tolerance, kf_estimate* out) {
    if (!out) return null_argument();
    return guard([&] {
        try {
            const auto est = klein::total_mass_check(tolerance);
            *out = {est.value, est.abs_error, est.samples_or_cells};
            return KF_OK;
        } catch (const klein::BudgetExceeded& e) {
            *out = {e.best_value(), e.best_error(), 0};
            return fail(KF_ERR_BUDGET, e.what());
        }
    });
}

kf_status kf_gk_sample_create(int position, uint64_t samples, uint64_t seed, unsigned workers,
                              kf_gk_sample** out) {
    if (!out) return null_argument();
    return guard([&] {
        *out = new kf_gk_sample{klein::gauss_kuzmin_empirical(position, samples, seed, workers)};
        return KF_OK;
    });
}

void kf_gk_sample_destroy(kf_gk_sample* sample) { delete sample; }

kf_status kf_gk_sample_cdf(const kf_gk_sample* sample, double x, double* out) {
    if (!sample || !out) return null_argument();
    *out = sample->sample.cdf(x);
    return KF_OK;
}

kf_status kf_gk_sample_sup_deviation(const kf_gk_sample* sample, kf_reference reference, double* out) {
    if (!sample || !out) return null_argument();
    if (reference == KF_REFERENCE_GAUSS)
        *out = sample->sample.sup_deviation_from_gauss();
    else if (reference == KF_REFERENCE_UNIFORM)
        *out = sample->sample.sup_deviation_from_uniform();
    else
        return fail(KF_ERR_INVALID_ARGUMENT, "unknown reference distribution");
    return KF_OK;
}

kf_status kf_gk_sample_digit_frequency(const kf_gk_sample* sample, int64_t k, double* out) {
    if (!sample || !out) return null_argument();
    return guard([&] {
        *out = sample->sample.digit_frequency(k);
        return KF_OK;
    });
}

kf_status kf_freq2d_exact(const kf_face* face, double rel_tolerance, kf_frequency* out) {
    if (!face || !out) return null_argument();
    return guard([&] {
        if (!(rel_tolerance > 0.0)) return fail(KF_ERR_INVALID_ARGUMENT, "tolerance must be positive");
        klein::ExactOptions options;
        options.rel_tol = rel_tolerance;
        try {
            fill(klein::frequency_exact(face->face, options), out);
            return KF_OK;
        } catch (const klein::BudgetExceeded& e) {
            klein::FrequencyResult best;
            best.value = e.best_value();
            best.error = e.best_error();
            fill(best, out);
            return fail(KF_ERR_BUDGET, e.what());
        }
    });
}

kf_status kf_freq2d_mc(const kf_face* face, uint64_t samples, uint64_t seed, unsigned workers,
                       kf_frequency* out) {
    if (!face || !out) return null_argument();
    return guard([&] {
        klein::MonteCarloOptions options;
        options.samples = samples;
        options.seed = seed;
        options.workers = workers;
        fill(klein::frequency_mc(face->face, options), out);
        return KF_OK;
    });
}

}  // extern "C"
