package com.example.glance;

import android.content.Context;
import android.widget.TextView;

/** Large clock in the middle of the lock screen. */
public class ClockView extends TextView {
    private float fontSize = 48f;

    public ClockView(Context context) {
        super(context);
    }

    /** Changes the clock text size. */
    public void setFontSize(float size) {
        fontSize = size;
        setTextSize(size);
    }
}
