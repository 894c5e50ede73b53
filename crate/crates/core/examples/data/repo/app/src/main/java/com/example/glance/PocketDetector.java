package com.example.glance;

import android.hardware.Sensor;
import android.hardware.SensorEvent;
import android.hardware.SensorEventListener;

/** Uses the proximity sensor to tell whether the phone is in a pocket. */
public class PocketDetector implements SensorEventListener {
    private static final float NEAR_DISTANCE = 1.0f;
    private boolean inPocket;

    @Override
    public void onSensorChanged(SensorEvent event) {
        inPocket = event.values[0] < NEAR_DISTANCE;
    }

    @Override
    public void onAccuracyChanged(Sensor sensor, int accuracy) {
    }

    /** Whether the screen may wake up now. */
    public boolean mayWakeScreen() {
        return !inPocket;
    }
}
