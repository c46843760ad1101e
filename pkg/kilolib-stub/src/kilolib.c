/*
 * No-op kilolib definitions.  Every symbol the header declares exists
 * here so generated controllers link; nothing moves, lights up or
 * transmits.  kilo_start returns immediately instead of entering the
 * control loop, keeping checked binaries inert.
 */
#include "kilolib.h"

volatile uint32_t kilo_ticks = 0;
uint16_t kilo_uid = 0;

uint8_t kilo_straight_left = 50;
uint8_t kilo_straight_right = 50;
uint8_t kilo_turn_left = 70;
uint8_t kilo_turn_right = 70;

message_rx_t kilo_message_rx = 0;
message_tx_t kilo_message_tx = 0;
message_tx_success_t kilo_message_tx_success = 0;

void kilo_init(void)
{
}

void kilo_start(void (*setup)(void), void (*loop)(void))
{
    (void)setup;
    (void)loop;
}

void set_motors(uint8_t left, uint8_t right)
{
    (void)left;
    (void)right;
}

void spinup_motors(void)
{
}

void set_color(uint8_t color)
{
    (void)color;
}

uint16_t message_crc(const message_t *msg)
{
    (void)msg;
    return 0;
}

uint8_t estimate_distance(const distance_measurement_t *dist)
{
    (void)dist;
    return 0;
}
