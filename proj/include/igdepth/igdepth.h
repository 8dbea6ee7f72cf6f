#ifndef IGDEPTH_H
#define IGDEPTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IGD_API __declspec(dllexport)
#elif defined(__GNUC__)
#define IGD_API __attribute__((visibility("default")))
#else
#define IGD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum igd_status {
  IGD_OK = 0,
  IGD_ERR_USAGE = 1,    /* bad arguments or parameters */
  IGD_ERR_DATA = 2,     /* unreadable input, size mismatch, empty set */
  IGD_ERR_INTERNAL = 3  /* library invariant violated */
} igd_status;

typedef enum igd_scene_type { IGD_INDOOR = 0, IGD_OUTDOOR = 1 } igd_scene_type;

typedef struct igd_rgb igd_rgb;
typedef struct igd_depth igd_depth;
typedef struct igd_labels igd_labels;
typedef struct igd_samples igd_samples;
typedef struct igd_mask igd_mask;
typedef struct igd_model igd_model;
typedef struct igd_chart igd_chart;
typedef struct igd_scene igd_scene;

/* Message of the last failed call on this thread; "" after success. */
IGD_API const char* igd_last_error(void);
IGD_API const char* igd_version(void);

/* ---- images ---------------------------------------------------------- */

IGD_API igd_status igd_rgb_read_png(const char* path, igd_rgb** out);
IGD_API igd_status igd_rgb_write_png(const igd_rgb* img, const char* path);
/* Interleaved 8-bit RGB, row major, width * height * 3 bytes. */
IGD_API igd_status igd_rgb_create(int width, int height, const uint8_t* data,
                                  igd_rgb** out);
IGD_API void igd_rgb_size(const igd_rgb* img, int* width, int* height);
IGD_API void igd_rgb_free(igd_rgb* img);

/* 16-bit PNG with a `<path>.scale` sidecar; 0 marks invalid pixels. */
IGD_API igd_status igd_depth_read_png(const char* path, igd_depth** out);
IGD_API igd_status igd_depth_write_png(const igd_depth* depth,
                                       const char* path);
/* `valid` may be NULL (all valid). */
IGD_API igd_status igd_depth_create(int width, int height, const double* depth,
                                    const uint8_t* valid, igd_depth** out);
IGD_API void igd_depth_size(const igd_depth* depth, int* width, int* height);
/* Copies width * height values; invalid pixels read 0 and valid[i] = 0.
   Either buffer may be NULL. */
IGD_API void igd_depth_copy(const igd_depth* depth, double* values,
                            uint8_t* valid);
IGD_API void igd_depth_free(igd_depth* depth);

/* `mask` may be NULL (whole image). range_cap <= 0 means no cap. */
IGD_API igd_status igd_rmse(const igd_depth* gt, const igd_depth* pred,
                            const igd_mask* mask, double range_cap,
                            double* out);
IGD_API igd_status igd_rel(const igd_depth* gt, const igd_depth* pred,
                           const igd_mask* mask, double range_cap,
                           double* out);

/* 8-bit PNG, nonzero = included. */
IGD_API igd_status igd_mask_read_png(const char* path, igd_mask** out);
IGD_API igd_status igd_mask_write_png(const igd_mask* mask, const char* path);
IGD_API void igd_mask_size(const igd_mask* mask, int* width, int* height);
IGD_API size_t igd_mask_count(const igd_mask* mask);
IGD_API void igd_mask_free(igd_mask* mask);

/* ---- superpixels ----------------------------------------------------- */

typedef struct igd_slic_params {
  int target_segments;
  double compactness;
  int max_iterations;
  double min_segment_fraction;
} igd_slic_params;

IGD_API void igd_slic_defaults(igd_slic_params* params);
IGD_API igd_status igd_slic(const igd_rgb* img, const igd_slic_params* params,
                            igd_labels** out);
IGD_API igd_status igd_labels_read_png(const char* path, igd_labels** out);
IGD_API igd_status igd_labels_write_png(const igd_labels* labels,
                                        const char* path);
IGD_API void igd_labels_size(const igd_labels* labels, int* width,
                             int* height);
IGD_API int igd_labels_count(const igd_labels* labels);
IGD_API void igd_labels_free(igd_labels* labels);

/* ---- samples ---------------------------------------------------------- */

/* Patterns carry positions only until igd_samples_measure. */
IGD_API igd_status igd_pattern_com(const igd_labels* labels,
                                   igd_samples** out);
IGD_API igd_status igd_pattern_com3(const igd_labels* labels,
                                    igd_samples** out);
IGD_API igd_status igd_pattern_grid(int width, int height, size_t n,
                                    igd_samples** out);
IGD_API igd_status igd_pattern_random(int width, int height, size_t n,
                                      uint64_t seed, igd_samples** out);
/* Reads depth at each position. `labels` (may be NULL) enables relocation
   of reads that hit invalid ground truth. */
IGD_API igd_status igd_samples_measure(const igd_samples* pattern,
                                       const igd_depth* gt,
                                       const igd_labels* labels,
                                       double noise_sigma, uint64_t noise_seed,
                                       igd_samples** out);
/* width/height 0: take them from the CSV comment line. */
IGD_API igd_status igd_samples_read_csv(const char* path, int width,
                                        int height, igd_samples** out);
IGD_API igd_status igd_samples_write_csv(const igd_samples* samples,
                                         const char* path);
IGD_API size_t igd_samples_count(const igd_samples* samples);
IGD_API int igd_samples_has_depth(const igd_samples* samples);
/* Nominal budget the samples were drawn for; at least the count. */
IGD_API size_t igd_samples_budget(const igd_samples* samples);
IGD_API void igd_samples_set_budget(igd_samples* samples, size_t budget);
IGD_API void igd_samples_size(const igd_samples* samples, int* width,
                              int* height);
IGD_API igd_status igd_samples_get(const igd_samples* samples, size_t index,
                                   int* x, int* y, double* depth);
IGD_API void igd_samples_free(igd_samples* samples);

/* ---- reconstruction -------------------------------------------------- */

typedef struct igd_bilateral_params {
  double spatial_sigma;
  double range_sigma;
  int window_radius;
} igd_bilateral_params;

IGD_API igd_status igd_bilateral_for_budget(int width, int height, size_t n,
                                            igd_scene_type scene,
                                            igd_bilateral_params* out);

/* Zero-order fill plus log-domain bilateral. `labels` NULL: nearest-sample
   partition. `bilateral` NULL: igd_bilateral_for_budget on the samples'
   budget. */
IGD_API igd_status igd_fill_ours(const igd_samples* samples,
                                 const igd_labels* labels,
                                 const igd_bilateral_params* bilateral,
                                 igd_scene_type scene, igd_depth** out);
IGD_API igd_status igd_fill_zero_order(const igd_samples* samples,
                                       const igd_labels* labels,
                                       igd_depth** out);
IGD_API igd_status igd_fill_bilinear(const igd_samples* samples,
                                     igd_depth** out);
IGD_API igd_status igd_fill_first_order(const igd_samples* samples,
                                        const igd_labels* labels,
                                        igd_depth** out);

/* Full pipelines against a simulated noiseless sensor reading `gt`.
   `slic` and `bilateral` may be NULL; samples_out and labels_out may be
   NULL. */
IGD_API igd_status igd_pipeline_ours(const igd_rgb* img, const igd_depth* gt,
                                     size_t n, const igd_slic_params* slic,
                                     const igd_bilateral_params* bilateral,
                                     igd_scene_type scene, igd_depth** out,
                                     igd_samples** samples_out,
                                     igd_labels** labels_out);
IGD_API igd_status igd_pipeline_first_order(const igd_rgb* img,
                                            const igd_depth* gt, size_t n,
                                            const igd_slic_params* slic,
                                            igd_depth** out,
                                            igd_samples** samples_out,
                                            igd_labels** labels_out);

/* ---- planar model ---------------------------------------------------- */

typedef struct igd_model_params {
  double inlier_tol;
  double depth_ref;
  int relative_tol;
  double min_region_fraction;
  size_t min_region_px;
  double delta_target;
  int max_regions;
  uint64_t seed;
} igd_model_params;

IGD_API void igd_model_defaults(igd_model_params* params);
IGD_API igd_status igd_fit_model(const igd_depth* depth,
                                 const igd_model_params* params,
                                 igd_model** out);
IGD_API void igd_model_stats(const igd_model* model, int* regions,
                             double* delta, double* epsilon);
IGD_API size_t igd_model_min_samples(const igd_model* model);
/* Plane coefficients depth = a x + b y + c of region `index`. */
IGD_API igd_status igd_model_plane(const igd_model* model, int index,
                                   double* a, double* b, double* c);
IGD_API igd_status igd_model_labels(const igd_model* model, igd_labels** out);
IGD_API igd_status igd_model_validity(const igd_model* model, igd_mask** out);
IGD_API igd_status igd_model_render(const igd_model* model, igd_depth** out);
IGD_API igd_status igd_model_optimal_rmse(const igd_model* model,
                                          const igd_depth* depth, double* out);
IGD_API void igd_model_free(igd_model* model);

/* ---- edge statistics ------------------------------------------------- */

IGD_API igd_status igd_rgb_edges(const igd_rgb* img, double high, double low,
                                 igd_mask** out);
IGD_API igd_status igd_depth_boundaries(const igd_depth* depth,
                                        double threshold, igd_mask** out);
IGD_API igd_status igd_edge_probabilities(const igd_mask* rgb_edges,
                                          const igd_mask* depth_edges,
                                          int tol_px, double* rgb_given_depth,
                                          double* depth_given_rgb);
IGD_API igd_status igd_boundary_overlay(const igd_mask* rgb_edges,
                                        const igd_mask* depth_edges,
                                        igd_rgb** out);

/* ---- MTF ------------------------------------------------------------- */

typedef struct igd_chart_params {
  int size;
  int sectors;
  double near_m;
  double far_m;
  uint64_t texture_seed;
} igd_chart_params;

typedef struct igd_mtf_point {
  double frequency;
  double mtf;
  double radius;
  double modulation;
} igd_mtf_point;

IGD_API void igd_chart_defaults(igd_chart_params* params);
IGD_API igd_status igd_chart_generate(const igd_chart_params* params,
                                      igd_chart** out);
/* Writes chart_rgb.png, chart_depth.png and chart.ini into `dir`. */
IGD_API igd_status igd_chart_save(const igd_chart* chart, const char* dir);
/* Regenerates the chart described by `dir`/chart.ini. */
IGD_API igd_status igd_chart_load(const char* dir, igd_chart** out);
/* Borrowed views; valid while the chart lives. */
IGD_API const igd_rgb* igd_chart_rgb(const igd_chart* chart);
IGD_API const igd_depth* igd_chart_depth(const igd_chart* chart);
/* `radii` NULL: the 16 default radii. Writes at most `capacity` points and
   stores the total in `count`. */
IGD_API igd_status igd_mtf(const igd_chart* chart, const igd_depth* recon,
                           const double* radii, size_t num_radii,
                           igd_mtf_point* points, size_t capacity,
                           size_t* count);
IGD_API void igd_chart_free(igd_chart* chart);

/* ---- synthetic scenes ------------------------------------------------ */

IGD_API igd_status igd_scene_load(const char* path, igd_scene** out);
IGD_API igd_status igd_scene_preset(const char* name, uint64_t seed,
                                    igd_scene** out);
/* Writes <id>_rgb.png, <id>_depth.png, <id>_mask.png (when the scene has
   objects), <id>_labels.png and <id>.ini into `dir`. */
IGD_API igd_status igd_scene_save(const igd_scene* scene, const char* dir,
                                  const char* id);
IGD_API void igd_scene_free(igd_scene* scene);

/* ---- evaluation ------------------------------------------------------ */

typedef struct igd_eval_summary {
  size_t images;
  size_t rows;
  size_t errors;
} igd_eval_summary;

/* workers > 0 overrides the config. */
IGD_API igd_status igd_evaluate(const char* config_path, const char* out_dir,
                                int workers, igd_eval_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* IGDEPTH_H */
