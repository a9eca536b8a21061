#ifndef HEEGAARD_SEIFERT_H
#define HEEGAARD_SEIFERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Zero is success.
typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_ARGUMENT = 1,
  HS_STATUS_INVALID_UTF8 = 2,
  HS_STATUS_PARSE = 3,
  HS_STATUS_INVALID = 4,
  HS_STATUS_NO_INTEGRAL_SOLUTION = 5,
  HS_STATUS_FAILED = 6,
  HS_STATUS_PANIC = 7,
} HsStatus;

// A validated link diagram. Only meaningful with the graph it was read against.
typedef struct HsDiagram HsDiagram;

// A validated Heegaard graph.
typedef struct HsGraph HsGraph;

// A spanning surface report.
typedef struct HsSurface HsSurface;

// Handle counts of a surface.
typedef struct HsSurfaceCounts {
  uint64_t h0;
  uint64_t h1_pairing;
  uint64_t h1_twist;
  uint64_t h2;
  int64_t chi;
  uint64_t boundary;
  uint64_t genus;
} HsSurfaceCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next library call on the same thread; do not free.
const char *hs_last_error_message(void);

// Free a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void hs_string_free(char *s);

// Parse and validate `.hg` text.
//
// # Safety
// `text_hg` is a NUL-terminated string; `out` is writable.
enum HsStatus hs_graph_parse(const char *text_hg, struct HsGraph **out);

// Compile `.plat` text into a graph.
//
// # Safety
// `text_plat` is a NUL-terminated string; `out` is writable.
enum HsStatus hs_graph_from_plat(const char *text_plat,
                                 bool allow_framing_mismatch,
                                 struct HsGraph **out);

// # Safety
// `g` comes from this library and is not used afterwards.
void hs_graph_free(struct HsGraph *g);

// Serialize to `.hg` text. Null on failure.
//
// # Safety
// `g` is a live handle.
char *hs_graph_to_string(const struct HsGraph *g);

// Genus of the graph, or -1 on a null handle.
//
// # Safety
// `g` is a live handle or null.
int64_t hs_graph_genus(const struct HsGraph *g);

// Determinant of the relator matrix and whether it is a unit.
//
// # Safety
// `g` is a live handle; outputs are writable.
enum HsStatus hs_graph_determinant(const struct HsGraph *g, int64_t *det, bool *is_zhs);

// Parse and validate `.tgl` text against `g`.
//
// # Safety
// `g` is a live handle; `text_tgl` is a NUL-terminated string; `out` is writable.
enum HsStatus hs_diagram_parse(const struct HsGraph *g,
                               const char *text_tgl,
                               struct HsDiagram **out);

// # Safety
// `d` comes from this library and is not used afterwards.
void hs_diagram_free(struct HsDiagram *d);

// Run the full pipeline.
//
// # Safety
// `g` and `d` are live handles, `d` read against `g`; `out` is writable.
enum HsStatus hs_seifert(const struct HsGraph *g,
                         const struct HsDiagram *d,
                         struct HsSurface **out);

// # Safety
// `s` comes from this library and is not used afterwards.
void hs_surface_free(struct HsSurface *s);

// # Safety
// `s` is a live handle; `out` is writable.
enum HsStatus hs_surface_counts(const struct HsSurface *s, struct HsSurfaceCounts *out);

// Serialize to `.surf` text. Null on failure.
//
// # Safety
// `s` is a live handle.
char *hs_surface_to_string(const struct HsSurface *s);

// SVG for a graph and optional diagram (`d` may be null). Null on failure.
//
// # Safety
// `g` is a live handle; `d` is a live handle or null.
char *hs_render_svg(const struct HsGraph *g, const struct HsDiagram *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HEEGAARD_SEIFERT_H */
