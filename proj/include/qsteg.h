/*
 * qsteg C interface.
 *
 * Objects are opaque handles created by the library and released with the
 * matching *_free call. Every fallible call returns a qs_status; on failure
 * qs_last_error() describes the most recent error on the calling thread.
 * Output handles are only written on success.
 */
#ifndef QSTEG_H_
#define QSTEG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QS_API __declspec(dllexport)
#else
#define QS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qs_status {
  QS_OK = 0,
  QS_ERR_INVALID_ARGUMENT = 1,
  QS_ERR_IO = 2,
  QS_ERR_FORMAT = 3,
  QS_ERR_DIMENSION = 4,
  QS_ERR_CAPACITY = 5,
  QS_ERR_DECODE = 6,
  QS_ERR_CALIBRATION = 7,
  QS_ERR_INTERNAL = 8
} qs_status;

typedef enum qs_scene_pattern {
  QS_SCENE_FLAT = 0,
  QS_SCENE_GRADIENT = 1,
  QS_SCENE_PCB = 2
} qs_scene_pattern;

typedef struct qs_scene_spec {
  uint32_t width;
  uint32_t height;
  qs_scene_pattern pattern;
  double mean_level;
} qs_scene_spec;

typedef struct qs_sensor_config {
  uint32_t full_well;
  double read_noise_sigma;
  double exposure_jitter_fraction;
  uint64_t seed;
} qs_sensor_config;

typedef struct qs_protocol_params {
  uint32_t parity_symbols;
  uint64_t mixing_seed;
  uint32_t block_pixels;
  uint32_t full_well;
} qs_protocol_params;

typedef struct qs_image qs_image;
typedef struct qs_calibration qs_calibration;
typedef struct qs_report qs_report;

QS_API const char* qs_version(void);
QS_API const char* qs_last_error(void);
QS_API const char* qs_status_name(qs_status status);

QS_API void qs_sensor_config_default(qs_sensor_config* out);
QS_API void qs_protocol_params_default(qs_protocol_params* out);
QS_API qs_status qs_parse_scene_pattern(const char* name, qs_scene_pattern* out);

/* Images */
QS_API qs_status qs_image_create(uint32_t width, uint32_t height, qs_image** out);
QS_API qs_status qs_image_from_pixels(uint32_t width, uint32_t height,
                                      const uint16_t* pixels, qs_image** out);
QS_API void qs_image_free(qs_image* img);
QS_API uint32_t qs_image_width(const qs_image* img);
QS_API uint32_t qs_image_height(const qs_image* img);
QS_API const uint16_t* qs_image_pixels(const qs_image* img);
QS_API qs_status qs_image_read_pgm(const char* path, qs_image** out);
/* Written to a temporary file first and renamed into place. */
QS_API qs_status qs_image_write_pgm(const qs_image* img, const char* path);

/* Camera simulation */
QS_API qs_status qs_capture(const qs_scene_spec* scene,
                            const qs_sensor_config* sensor,
                            uint64_t capture_index, qs_image** out);
QS_API qs_status qs_capture_pair(const qs_scene_spec* scene,
                                 const qs_sensor_config* sensor,
                                 qs_image** key_out, qs_image** cover_out);

/* Protocol */
QS_API qs_status qs_message_capacity(const qs_image* key,
                                     const qs_protocol_params* params,
                                     size_t* bytes_out);
QS_API qs_status qs_embed_message(const qs_image* key, const qs_image* cover,
                                  const uint8_t* message, size_t length,
                                  const qs_protocol_params* params,
                                  qs_image** stego_out);
/* On success *message_out is released with qs_buffer_free. */
QS_API qs_status qs_extract_message(const qs_image* stego, const qs_image* key,
                                    const qs_protocol_params* params,
                                    uint8_t** message_out, size_t* length_out);
QS_API void qs_buffer_free(uint8_t* buffer);

/* Analysis */
QS_API qs_status qs_lsb_embed_random(const qs_image* img, uint64_t seed,
                                     qs_image** out);
/* Histograms of both images over a common binning, as CSV files. */
QS_API qs_status qs_write_histogram_pair_csv(const qs_image* a, const qs_image* b,
                                             uint32_t bin_width,
                                             const char* path_a,
                                             const char* path_b);
QS_API qs_status qs_calibrate(const qs_scene_spec* scene,
                              const qs_sensor_config* sensor, uint32_t trials,
                              uint32_t bin_width, const char* path);
QS_API qs_status qs_calibration_load(const char* path, qs_calibration** out);
QS_API void qs_calibration_free(qs_calibration* cal);
/* reference may be NULL. */
QS_API qs_status qs_ward_test(const qs_image* img, const qs_image* reference,
                              const qs_calibration* cal, qs_report** out);
QS_API int qs_report_is_suspicious(const qs_report* report);
QS_API double qs_report_kl_bits(const qs_report* report);
QS_API double qs_report_chi2_pvalue(const qs_report* report);
QS_API qs_status qs_report_write(const qs_report* report, const char* path);
QS_API void qs_report_free(qs_report* report);

/* Whole-file write through a temporary and rename. */
QS_API qs_status qs_write_file(const char* path, const uint8_t* data, size_t length);

#ifdef __cplusplus
}
#endif

#endif /* QSTEG_H_ */
