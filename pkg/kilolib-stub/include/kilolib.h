/*
 * Minimal kilolib-compatible surface for compile-checking generated
 * controllers off-robot.  Declarations match the classic Kilobot C API
 * closely enough that a controller built against this header also
 * builds against the real library.  The paired kilolib.c provides
 * no-op definitions so checked code links into a runnable (inert)
 * binary; nothing here emulates firmware behaviour.
 */
#ifndef KILOLIB_H
#define KILOLIB_H

#include <stdint.h>

/* Pack 2-bit RGB channels the way the robot's LED driver expects. */
#define RGB(r, g, b) ((uint8_t)(((r) & 3) | (((g) & 3) << 2) | (((b) & 3) << 4)))

typedef struct {
    uint8_t data[9]; /* fixed 9-byte payload frame */
    uint8_t type;
    uint16_t crc;
} message_t;

typedef struct {
    int16_t low_gain;
    int16_t high_gain;
} distance_measurement_t;

typedef void (*message_rx_t)(message_t *, distance_measurement_t *);
typedef message_t *(*message_tx_t)(void);
typedef void (*message_tx_success_t)(void);

/* 32 Hz tick counter maintained by the runtime. */
extern volatile uint32_t kilo_ticks;
extern uint16_t kilo_uid;

/* Motor calibration values; per-robot on real hardware. */
extern uint8_t kilo_straight_left;
extern uint8_t kilo_straight_right;
extern uint8_t kilo_turn_left;
extern uint8_t kilo_turn_right;

/* Messaging callbacks are registered by assigning these pointers. */
extern message_rx_t kilo_message_rx;
extern message_tx_t kilo_message_tx;
extern message_tx_success_t kilo_message_tx_success;

void kilo_init(void);
void kilo_start(void (*setup)(void), void (*loop)(void));

void set_motors(uint8_t left, uint8_t right);
void spinup_motors(void);
void set_color(uint8_t color);

uint16_t message_crc(const message_t *msg);
uint8_t estimate_distance(const distance_measurement_t *dist);

#endif /* KILOLIB_H */
