# Independent high-precision (mpmath) recomputation of the values frozen into
# the C++ tests. Run: python3 tests/oracles/freeze_values.py
from mpmath import mp, mpf, asin, sqrt, sin, cos, pi, binomial, log
import math
mp.dps=40
def da(a,N): return (asin(sqrt(mpf(a)/(N+1)))+asin(sqrt(mpf(a+1)/(N+1))))/2
def cf(p,N): N=mpf(N); return (asin(sqrt(p*N/(N+1)))+asin(sqrt((p*N+1)/(N+1))))/2
print("da 32,16557", da(32,16557)); print("da 1,676", da(1,676)); print("da 0,676",da(0,676))
print("cf .1,36", cf(mpf('0.1'),36))
t1,t2=da(32,16557),da(1,676); w1,w2=66230,2706
th=(w1*t1+w2*t2)/(w1+w2); v=mpf(1)/(w1+w2); print("pooled",th,"v",v)
Nimp=(1/v-2)/4; print("Nimp",Nimp)
def inv(theta,N):
    lo,hi=mpf(0),mpf(1)
    for i in range(200):
        m=(lo+hi)/2
        if cf(m,N)<theta: lo=m
        else: hi=m
    return (lo+hi)/2
print("phat",inv(th,Nimp))
ns=[10,100,1000,10000]; ts=[da(n//10,n) for n in ns]; ws=[4*n+2 for n in ns]
th4=sum(w*t for w,t in zip(ws,ts))/sum(ws); se=sqrt(1/mpf(sum(ws)))
z=mpf('1.959963984540054')
H=4/sum(mpf(1)/n for n in ns)
print("four theta",th4,"ci",th4-z*se,th4+z*se,"H",H, "ts",ts)
print("four p",inv(th4,H),inv(th4-z*se,H),inv(th4+z*se,H))
def miller(theta,N):
    phi=2*theta; s=sin(phi)
    return (1-mp.sign(cos(phi))*sqrt(1-(s+(s-1/s)/N)**2))/2
for p,N in [(0.3,200),(0.5,50),(0.00194,17233.5),(0.1,36),(0.9,36),(0.01,5)]:
    print("miller",p,N,miller(cf(mpf(p),N),N))
# Q for four-study
Q=sum(w*(t-th4)**2 for w,t in zip(ws,ts)); print("Q four",Q)
def ev(kind,N,p):
    p=mpf(p); E=0;E2=0
    for a in range(N+1):
        pm=binomial(N,a)*p**a*(1-p)**(N-a)
        t= da(a,N) if kind=='d' else asin(sqrt(mpf(a)/N))
        E+=pm*t;E2+=pm*t*t
    return E2-E*E
for N in [20,50,100]:
    rd=[ev('d',N,k/20)*(4*N+2) for k in range(1,20)]
    rs=[ev('s',N,k/20)*(4*N) for k in range(1,20)]
    print(N,"spread d",max(rd)-min(rd),"s",max(rs)-min(rs), "maxdev d",max(abs(r-1) for r in rd),"s",max(abs(r-1) for r in rs))
print("d50 .5", ev('d',50,0.5)*202, "s50 .5", ev('s',50,0.5)*200)
print("ev 30 .2 d", ev('d',30,0.2), ev('s',30,0.2))
print("lim", da(3000,10000)-asin(sqrt(mpf('0.3'))))
