#ifndef KLEINFREQ_H
#define KLEINFREQ_H

/* C interface to the klein continued-fraction frequency library.
 *
 * Every function returns a kf_status. On failure a thread-local message is
 * available from kf_last_error(). String outputs follow the snprintf
 * convention: `needed` receives the length including the terminating zero,
 * and KF_ERR_BUFFER_TOO_SMALL is returned if it exceeds `capacity`. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KF_API __declspec(dllexport)
#else
#define KF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kf_status {
    KF_OK = 0,
    KF_ERR_INVALID_ARGUMENT = 1,
    KF_ERR_INVALID_FACE = 2,
    KF_ERR_INVALID_MAP = 3,
    KF_ERR_DEGENERATE = 4,
    KF_ERR_OUT_OF_RANGE = 5,
    KF_ERR_SINGULAR = 6,
    KF_ERR_UNBOUNDED = 7,
    KF_ERR_INSUFFICIENT_DEPTH = 8,
    KF_ERR_UNSUPPORTED = 9,
    KF_ERR_BUDGET = 10,
    KF_ERR_NO_SAMPLES = 11,
    KF_ERR_PARSE = 12,
    KF_ERR_BUFFER_TOO_SMALL = 13,
    KF_ERR_INTERNAL = 14
} kf_status;

typedef enum kf_parity { KF_PARITY_SHORTEST = 0, KF_PARITY_EVEN = 1, KF_PARITY_ODD = 2 } kf_parity;

typedef enum kf_method { KF_METHOD_EXACT = 0, KF_METHOD_MC = 1 } kf_method;

typedef enum kf_reference { KF_REFERENCE_GAUSS = 0, KF_REFERENCE_UNIFORM = 1 } kf_reference;

typedef struct kf_face kf_face;
typedef struct kf_gk_sample kf_gk_sample;

typedef struct kf_estimate {
    double value;
    double abs_error;
    uint64_t cells;
} kf_estimate;

typedef struct kf_frequency {
    double value;
    double error;
    kf_method method;
    uint64_t samples;
    uint64_t accepted;
    uint64_t inconclusive;
    uint64_t outside_support;
    uint64_t cells;
    int inconclusive_warning;
} kf_frequency;

KF_API const char* kf_last_error(void);
KF_API const char* kf_status_string(kf_status status);

/* Faces. `xyz` holds 3 * count coordinates. */
KF_API kf_status kf_face_create(const int64_t* xyz, size_t count, kf_face** out);
KF_API kf_status kf_face_from_json(const char* json, kf_face** out);
/* Catalog ids: T1, T2, Q1, T1d2, Q1d2, T3i, A<n>, B<n>. */
KF_API kf_status kf_face_from_catalog(const char* id, kf_face** out);
KF_API void kf_face_destroy(kf_face* face);
KF_API kf_status kf_face_integer_area(const kf_face* face, int64_t* out);
KF_API kf_status kf_face_integer_distance(const kf_face* face, int64_t* out);
KF_API kf_status kf_face_vertex_count(const kf_face* face, size_t* out);
KF_API kf_status kf_face_vertices(const kf_face* face, int64_t* xyz, size_t capacity);
KF_API kf_status kf_face_to_json(const kf_face* face, char* buffer, size_t capacity, size_t* needed);
/* Row-major 3x3 integer matrix with determinant +-1. */
KF_API kf_status kf_face_apply_unimodular(const kf_face* face, const int64_t matrix[9], kf_face** out);
/* Comma-separated ids of the fixed catalog entries. */
KF_API kf_status kf_catalog_ids(char* buffer, size_t capacity, size_t* needed);
/* Number of fixed entries whose declared area/distance disagree with recomputation. */
KF_API kf_status kf_catalog_verify(size_t* mismatches);

/* One-dimensional continued fractions; `alpha` is "p" or "p/q". */
KF_API kf_status kf_cf_expand(const char* alpha, kf_parity parity, char* buffer, size_t capacity, size_t* needed);
KF_API kf_status kf_sail_vertices(const char* alpha, char* buffer, size_t capacity, size_t* needed);
KF_API kf_status kf_sail_cf(const char* alpha, char* buffer, size_t capacity, size_t* needed);
KF_API kf_status kf_cf_value(const char* elements, char* buffer, size_t capacity, size_t* needed);

KF_API kf_status kf_freq1d_exact(int64_t k, double* out);
KF_API kf_status kf_freq1d_numeric(int64_t k, double tolerance, kf_estimate* out);
KF_API kf_status kf_freq1d_partial_sum(int64_t k_max, double* out);
KF_API kf_status kf_gk_frequency(int64_t k, double* out);
KF_API kf_status kf_total_mass(double tolerance, kf_estimate* out);

/* Gauss-Kuzmin experiments. workers == 0 uses all hardware threads. */
KF_API kf_status kf_gk_sample_create(int position, uint64_t samples, uint64_t seed, unsigned workers,
                                     kf_gk_sample** out);
KF_API void kf_gk_sample_destroy(kf_gk_sample* sample);
KF_API kf_status kf_gk_sample_cdf(const kf_gk_sample* sample, double x, double* out);
KF_API kf_status kf_gk_sample_sup_deviation(const kf_gk_sample* sample, kf_reference reference, double* out);
KF_API kf_status kf_gk_sample_digit_frequency(const kf_gk_sample* sample, int64_t k, double* out);

/* Relative frequencies of faces. On KF_ERR_BUDGET `out` holds the best estimate. */
KF_API kf_status kf_freq2d_exact(const kf_face* face, double rel_tolerance, kf_frequency* out);
KF_API kf_status kf_freq2d_mc(const kf_face* face, uint64_t samples, uint64_t seed, unsigned workers,
                              kf_frequency* out);

#ifdef __cplusplus
}
#endif

#endif
