package fixtures;

class Multifaceted {
    private int a;
    private int b;
    private int c;
    private int d;
    private int e;

    void setA(int v) {
        a = v;
    }

    int getA() {
        return a;
    }

    void setB(int v) {
        b = v;
    }

    int getB() {
        return b;
    }

    void setC(int v) {
        c = v;
    }

    int getC() {
        return c;
    }

    void setD(int v) {
        d = v;
    }

    int getD() {
        return d;
    }

    void setE(int v) {
        e = v;
    }

    int getE() {
        return e;
    }
}
