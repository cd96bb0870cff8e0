#ifndef TPRQA_H
#define TPRQA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TprqaStatus {
  TPRQA_STATUS_OK = 0,
  TPRQA_STATUS_NULL_POINTER = 1,
  TPRQA_STATUS_INVALID_UTF8 = 2,
  TPRQA_STATUS_INVALID_ARGUMENT = 3,
  TPRQA_STATUS_CONFIG = 4,
  TPRQA_STATUS_IO = 5,
  TPRQA_STATUS_PARSE = 6,
  TPRQA_STATUS_NO_ANSWER = 7,
  TPRQA_STATUS_PANIC = 8,
} TprqaStatus;

// Opaque engine handle.
typedef struct TprqaEngine TprqaEngine;

// Opaque story handle. Independent of the engine once created.
typedef struct TprqaStory TprqaStory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an engine. `config_toml` is the text of a configuration file, or
// null for the defaults.
//
// # Safety
// `config_toml` must be null or a valid nul-terminated string; `out` must be
// a valid pointer to writable storage.
enum TprqaStatus tprqa_engine_new(const char *config_toml, struct TprqaEngine **out);

// # Safety
// `engine` must be null or a handle from [`tprqa_engine_new`] not yet freed.
void tprqa_engine_free(struct TprqaEngine *engine);

// Starts a story in category `task` (1 to 20).
//
// # Safety
// `engine` must be a live engine handle; `out` must be a valid pointer.
enum TprqaStatus tprqa_story_new(struct TprqaEngine *engine, uint8_t task, struct TprqaStory **out);

// Feeds one line. For a question, `*answer` receives a new string owned by
// the caller; for a statement it is set to null. `answer` may be null when
// the caller does not want the text.
//
// # Safety
// `story` must be a live story handle; `line` a valid nul-terminated string;
// `answer` null or a valid pointer.
enum TprqaStatus tprqa_story_feed(struct TprqaStory *story, const char *line, char **answer);

// Writes up to `cap` line numbers used by the most recent answer into
// `times` and their total number into `len`.
//
// # Safety
// `story` must be a live story handle; `times` must hold `cap` elements (it
// may be null when `cap` is 0); `len` must be a valid pointer.
enum TprqaStatus tprqa_story_clues(const struct TprqaStory *story,
                                   size_t *times,
                                   size_t cap,
                                   size_t *len);

// # Safety
// `story` must be null or a handle from [`tprqa_story_new`] not yet freed.
void tprqa_story_free(struct TprqaStory *story);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void tprqa_string_free(char *s);

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *tprqa_last_error(void);

// Static name of a status code.
const char *tprqa_status_name(enum TprqaStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TPRQA_H */
